"""Exact exp/log between strictly upper triangular and unitriangular
rational matrices, the BCH product, and the lamplighter group acting
through ``G(m) = exp(E(m))``.

Matrices are numpy object arrays of :class:`fractions.Fraction`; every
series here terminates because the matrices are nilpotent.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from .lie import build_E_model, commutator
from .linalg import QMatrix, QVector, as_rat, format_rat, solve


def _as_array(entries) -> np.ndarray:
    M = np.array(entries, dtype=object)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return np.vectorize(as_rat, otypes=[object])(M) if M.size else M


def _identity(s: int) -> np.ndarray:
    M = np.full((s, s), Fraction(0), dtype=object)
    for i in range(s):
        M[i, i] = Fraction(1)
    return M


class _Square:
    def __init__(self, entries):
        self.entries = _as_array(entries)
        self._check()

    def _check(self):
        pass

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if type(other) is type(self):
            return np.array_equal(self.entries, other.entries)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.entries.ravel()))

    def to_json(self) -> list:
        return [[format_rat(x) for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, data):
        return cls([[as_rat(x) for x in row] for row in data])

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"


class StrictTriangular(_Square):
    """Element of ``U(s)``: zero on and below the diagonal."""

    def _check(self):
        s = self.size
        for i in range(s):
            for j in range(i + 1):
                if self.entries[i, j] != 0:
                    raise ValueError(f"entry ({i}, {j}) must vanish in a strictly triangular matrix")

    @classmethod
    def zero(cls, s: int) -> "StrictTriangular":
        return cls(np.full((s, s), Fraction(0), dtype=object))

    def __add__(self, other: "StrictTriangular") -> "StrictTriangular":
        return StrictTriangular(self.entries + other.entries)

    def __sub__(self, other: "StrictTriangular") -> "StrictTriangular":
        return StrictTriangular(self.entries - other.entries)

    def __neg__(self) -> "StrictTriangular":
        return StrictTriangular(-self.entries)

    def scale(self, c) -> "StrictTriangular":
        return StrictTriangular(as_rat(c) * self.entries)

    def bracket(self, other: "StrictTriangular") -> "StrictTriangular":
        return StrictTriangular(commutator(self.entries, other.entries))


class Unitriangular(_Square):
    """Element of ``T(s)``: ones on the diagonal, zero below."""

    def _check(self):
        s = self.size
        for i in range(s):
            if self.entries[i, i] != 1:
                raise ValueError(f"diagonal entry ({i}, {i}) must be 1")
            for j in range(i):
                if self.entries[i, j] != 0:
                    raise ValueError(f"entry ({i}, {j}) must vanish in a unitriangular matrix")

    @classmethod
    def identity(cls, s: int) -> "Unitriangular":
        return cls(_identity(s))

    def __matmul__(self, other: "Unitriangular") -> "Unitriangular":
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Unitriangular(self.entries @ other.entries)

    def inverse(self) -> "Unitriangular":
        # (I + N)^-1 = Σ (-N)^k
        s = self.size
        N = self.entries - _identity(s)
        out, term = _identity(s), _identity(s)
        for _ in range(1, s):
            term = -(term @ N)
            out = out + term
        return Unitriangular(out)

    def __pow__(self, k: int) -> "Unitriangular":
        base = self if k >= 0 else self.inverse()
        out = Unitriangular.identity(self.size)
        for _ in range(abs(k)):
            out = out @ base
        return out


def mat_exp(M: StrictTriangular) -> Unitriangular:
    """``Σ_{k<s} M^k / k!``."""
    s = M.size
    out, power = _identity(s), _identity(s)
    for k in range(1, s):
        power = power @ M.entries
        out = out + power * Fraction(1, factorial(k))
    return Unitriangular(out)


def mat_log(U: Unitriangular) -> StrictTriangular:
    """``Σ_{k<s} (-1)^(k+1) (U - I)^k / k``."""
    s = U.size
    N = U.entries - _identity(s)
    out = np.full((s, s), Fraction(0), dtype=object)
    power = _identity(s)
    for k in range(1, s):
        power = power @ N
        out = out + power * Fraction((-1) ** (k + 1), k)
    return StrictTriangular(out)


def bch(X: StrictTriangular, Y: StrictTriangular) -> StrictTriangular:
    """``log(exp X · exp Y)``."""
    if X.size != Y.size:
        raise ValueError(f"size mismatch: {X.size} vs {Y.size}")
    return mat_log(mat_exp(X) @ mat_exp(Y))


# -- the lamplighter group ------------------------------------------------

_TOKEN = re.compile(r"^([ab])(?:\^\(?([+-]?\d+)\)?)?$")


@dataclass(frozen=True)
class GroupWord:
    """Word in the generators a, b as ``((letter, exponent), ...)``,
    kept freely reduced: no zero exponents, no equal neighbours."""

    letters: tuple = ()

    def __post_init__(self):
        out: list[list] = []
        for g, e in self.letters:
            if g not in ("a", "b"):
                raise ValueError(f"unknown generator {g!r}")
            e = int(e)
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            elif e:
                out.append([g, e])
        object.__setattr__(self, "letters", tuple((g, e) for g, e in out))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse ``"b^-2 a b^2 a^-1"``; the empty string is the identity."""
        letters = []
        for tok in text.split():
            mt = _TOKEN.match(tok)
            if not mt:
                raise ValueError(f"cannot parse group word token {tok!r}")
            letters.append((mt.group(1), int(mt.group(2) or 1)))
        return cls(tuple(letters))

    @classmethod
    def gen(cls, g: str, e: int = 1) -> "GroupWord":
        return cls(((g, e),))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __str__(self):
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)


def conjugate(x: GroupWord, y: GroupWord) -> GroupWord:
    """``x^y = y x y^-1``, the convention under which ψ(a^(b^i)) = 1 + B_0 e^(iA)."""
    return y * x * y.inverse()


def group_commutator(x: GroupWord, y: GroupWord) -> GroupWord:
    """``[x, y] = x^-1 y^-1 x y``."""
    return x.inverse() * y.inverse() * x * y


def lamplighter_relator(i: int) -> GroupWord:
    """``[a, a^(b^i)]``."""
    a = GroupWord.gen("a")
    return group_commutator(a, conjugate(a, GroupWord.gen("b", i)))


def psi_generators(m: int) -> dict[str, Unitriangular]:
    """``ψ(a) = exp(B_0) = 1 + B_0`` and ``ψ(b) = exp(-A)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    A, B = build_E_model(m)
    return {"a": mat_exp(StrictTriangular(B[0].expand())),
            "b": mat_exp(StrictTriangular(-A.expand()))}


def psi_eval(w: GroupWord | str, m: int) -> Unitriangular:
    """Image of the word ``w`` in ``T(m+1)``."""
    if isinstance(w, str):
        w = GroupWord.parse(w)
    gens = psi_generators(m)
    out = Unitriangular.identity(m + 1)
    for g, e in w.letters:
        out = out @ gens[g] ** e
    return out


# -- sampling and the subgroup probe -------------------------------------

def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))


def random_strict_triangular(s: int, rng: random.Random) -> StrictTriangular:
    M = np.full((s, s), Fraction(0), dtype=object)
    for i in range(s):
        for j in range(i + 1, s):
            M[i, j] = random_rational(rng)
    return StrictTriangular(M)


def e_span_basis(m: int) -> list[np.ndarray]:
    """Expanded basis ``A, B_0, ..., B_{m-1}`` of ``E(m)``."""
    A, B = build_E_model(m)
    return [A.expand()] + [b.expand() for b in B]


def span_coordinates(M: np.ndarray, basis: Sequence[np.ndarray]) -> QVector | None:
    """Coordinates of ``M`` in the span of ``basis``, or None if outside it."""
    cols = [QVector.from_dense(B.ravel()) for B in basis]
    return solve(QMatrix.from_columns(M.size, cols), QVector.from_dense(M.ravel()))


def random_span_element(basis: Sequence[np.ndarray], rng: random.Random) -> StrictTriangular:
    M = sum((random_rational(rng) * B for B in basis[1:]), random_rational(rng) * basis[0])
    return StrictTriangular(M)


def group_closure_probe(m: int, trials: int = 100, seed: int = 0,
                        basis: Sequence[np.ndarray] | None = None) -> bool:
    """Sample ``g = exp P``, ``h = exp Q`` with ``P, Q`` in the span of
    ``basis`` (default ``E(m)``) and test that ``log(g h)`` stays in the span."""
    if m < 1:
        raise ValueError("m must be at least 1")
    basis = e_span_basis(m) if basis is None else list(basis)
    rng = random.Random(seed)
    for _ in range(trials):
        P = random_span_element(basis, rng)
        Q = random_span_element(basis, rng)
        if span_coordinates(bch(P, Q).entries, basis) is None:
            return False
    return True


def relations_report(m: int, i_max: int) -> dict:
    """ψ on ``a^(b^i)`` and on the relators, for ``|i| <= i_max``."""
    A, B = build_E_model(m)
    A_mat = StrictTriangular(A.expand())
    B0 = B[0].expand()
    a = GroupWord.gen("a")
    records = []
    for i in range(-i_max, i_max + 1):
        conj = psi_eval(conjugate(a, GroupWord.gen("b", i)), m)
        expected = _identity(m + 1) + B0 @ mat_exp(A_mat.scale(i)).entries
        records.append({
            "i": i,
            "conjugate_formula": bool(np.array_equal(conj.entries, expected)),
            "relator_trivial": psi_eval(lamplighter_relator(i), m) == Unitriangular.identity(m + 1),
        })
    passed = all(r["conjugate_formula"] and r["relator_trivial"] for r in records)
    return {"m": m, "i_max": i_max, "records": records, "passed": passed}


def dumps_matrix(M: _Square) -> str:
    return json.dumps(M.to_json())


def load_strict(data: Iterable) -> StrictTriangular:
    return StrictTriangular([[as_rat(x) for x in row] for row in data])
