"""Chevalley-Eilenberg chains ``(Λ sE, d)`` of a finite-dimensional Lie
algebra and their homology over Q.

A degree-q monomial ``s z_{i1} ∧ ... ∧ s z_{iq}`` is stored as the sorted
tuple of indices; all suspended generators are odd, so permuting factors
costs the permutation sign and a repeated index kills the monomial.

The differential is

    d(s x_1 ∧ ... ∧ s x_p) = Σ_{i<j} (-1)^(i+j) s[x_i, x_j] ∧ s x_1 ∧ ... (omit i, j) ... ∧ s x_p
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .lie import FinLieAlgebra
from .linalg import (
    EchelonBasis, QMatrix, QVector, as_rat, format_rat, in_image, kernel_basis, mat_rank,
)


def canonicalize(indices: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sort ``indices`` as odd generators: returns ``(sign, sorted_tuple)``.

    ``sign`` is 0 when an index repeats.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    # parity of the permutation = parity of the inversion count
    inversions = sum(1 for a, b in itertools.combinations(idx, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


@dataclass(frozen=True, order=True)
class ChainMonomial:
    indices: tuple

    def __post_init__(self):
        idx = tuple(self.indices)
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices {idx} are not strictly increasing; use canonicalize()")
        object.__setattr__(self, "indices", idx)

    @property
    def degree(self) -> int:
        return len(self.indices)


@dataclass
class Chain:
    """Rational combination of degree-q monomials (no zero coefficients)."""

    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            key = mono.indices if isinstance(mono, ChainMonomial) else tuple(mono)
            if len(key) != self.degree:
                raise ValueError(f"monomial {key} does not have degree {self.degree}")
            c = as_rat(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def monomial(cls, indices: Iterable[int], coeff=1) -> "Chain":
        """The chain ``coeff * s z_{i1} ∧ ...``, canonicalized with its sign."""
        idx = tuple(indices)
        sign, key = canonicalize(idx)
        if sign == 0:
            return cls(len(idx))
        return cls(len(idx), {key: sign * as_rat(coeff)})

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls(degree)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Chain):
            return self.degree == other.degree and self.terms == other.terms
        return NotImplemented

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise ValueError("cannot add chains of different degree")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Chain(self.degree, out)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, c) -> "Chain":
        c = as_rat(c)
        return Chain(self.degree, {k: c * x for k, x in self.terms.items()})

    __rmul__ = scale

    def items(self):
        return sorted(self.terms.items())

    def to_json(self) -> list:
        return [{"indices": list(k), "coeff": format_rat(c)} for k, c in self.items()]

    @classmethod
    def from_json(cls, data: list, degree: int | None = None) -> "Chain":
        if degree is None:
            if not data:
                raise ValueError("degree is required for an empty chain")
            degree = len(data[0]["indices"])
        out = cls(degree)
        for rec in data:
            out = out + cls.monomial(rec["indices"], as_rat(rec["coeff"]))
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def to_vector(self, basis_index: Mapping[tuple, int]) -> QVector:
        return QVector({basis_index[k]: c for k, c in self.terms.items()})

    @classmethod
    def from_vector(cls, v: QVector, basis: list, degree: int) -> "Chain":
        return cls(degree, {basis[i]: c for i, c in v.items()})


def chain_basis(L: FinLieAlgebra, q: int) -> list[tuple[int, ...]]:
    """All strictly increasing q-subsets of the basis, lexicographically."""
    if q < 0 or q > L.dim:
        return []
    return list(itertools.combinations(range(L.dim), q))


def differential_of_monomial(L: FinLieAlgebra, indices: tuple[int, ...]) -> dict[tuple, Fraction]:
    p = len(indices)
    out: dict[tuple, Fraction] = {}
    if p < 2:
        return out
    for a, b in itertools.combinations(range(p), 2):
        br = L.basis_bracket(indices[a], indices[b])
        if not br:
            continue
        # 1-based positions a+1, b+1
        sign = -1 if (a + b) % 2 else 1
        rest = indices[:a] + indices[a + 1:b] + indices[b + 1:]
        for k, c in br.items():
            s, key = canonicalize((k,) + rest)
            if s:
                out[key] = out.get(key, 0) + sign * s * c
    return {k: c for k, c in out.items() if c}


def ce_differential(L: FinLieAlgebra, c: Chain) -> Chain:
    """Apply the Chevalley-Eilenberg differential; the degree drops by one."""
    if c.degree <= 1:
        return Chain(max(c.degree - 1, 0))
    out: dict[tuple, Fraction] = {}
    for mono, coeff in c.terms.items():
        for key, x in differential_of_monomial(L, mono).items():
            out[key] = out.get(key, 0) + coeff * x
    return Chain(c.degree - 1, out)


def differential_matrix(L: FinLieAlgebra, q: int) -> QMatrix:
    """Matrix of ``d: C_q -> C_{q-1}`` over :func:`chain_basis` orders."""
    if q < 1 or q > L.dim:
        raise ValueError(f"degree q={q} outside 1..{L.dim}")
    source = chain_basis(L, q)
    target = {mono: i for i, mono in enumerate(chain_basis(L, q - 1))}
    entries = {}
    for j, mono in enumerate(source):
        for key, x in differential_of_monomial(L, mono).items():
            entries[target[key], j] = x
    return QMatrix(len(target), len(source), entries)


def _rank_d(L: FinLieAlgebra, q: int) -> int:
    if q < 1 or q > L.dim:
        return 0
    return mat_rank(differential_matrix(L, q))


def chain_dim(L: FinLieAlgebra, q: int) -> int:
    return math.comb(L.dim, q) if 0 <= q <= L.dim else 0


def homology_dim(L: FinLieAlgebra, q: int) -> int:
    """Betti number ``dim ker d_q - rank d_{q+1}``."""
    if q < 0 or q > L.dim:
        raise ValueError(f"degree q={q} outside 0..{L.dim}")
    return chain_dim(L, q) - _rank_d(L, q) - _rank_d(L, q + 1)


def homology_table(L: FinLieAlgebra) -> list[dict]:
    """Rows ``{q, chain_dim, rank_d, dim}`` for ``q = 0..dim L``."""
    ranks = [_rank_d(L, q) for q in range(L.dim + 2)]
    return [
        {"q": q, "chain_dim": chain_dim(L, q), "rank_d": ranks[q],
         "dim": chain_dim(L, q) - ranks[q] - ranks[q + 1]}
        for q in range(L.dim + 1)
    ]


def _cycles(L: FinLieAlgebra, q: int) -> list[QVector]:
    n = chain_dim(L, q)
    if q == 0:
        return [QVector.unit(0)]
    return kernel_basis(differential_matrix(L, q)) if n else []


def _boundaries(L: FinLieAlgebra, q: int) -> list[QVector]:
    if q + 1 > L.dim:
        return []
    return differential_matrix(L, q + 1).columns()


def homology_representatives(L: FinLieAlgebra, q: int) -> list[Chain]:
    """Cycles whose classes form a basis of ``H_q``.

    Reduced-echelon kernel vectors of ``d_q`` are kept, in order, whenever
    they are independent of the boundaries and of those already kept.
    """
    if q < 0 or q > L.dim:
        raise ValueError(f"degree q={q} outside 0..{L.dim}")
    basis = chain_basis(L, q)
    span = EchelonBasis(_boundaries(L, q))
    reps = [z for z in _cycles(L, q) if span.add(z)]
    return [Chain.from_vector(z, basis, q) for z in reps]


def is_boundary(L: FinLieAlgebra, c: Chain) -> bool:
    if c.degree + 1 > L.dim:
        return not c
    index = {mono: i for i, mono in enumerate(chain_basis(L, c.degree))}
    return in_image(differential_matrix(L, c.degree + 1), c.to_vector(index))
