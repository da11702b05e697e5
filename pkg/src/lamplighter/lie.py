"""Finite-dimensional Lie algebras by structure constants, and the
lamplighter quotients ``Q[x]/x^m ⋊ Qt`` with their strictly triangular
matrix model ``E(m)``.

Basis order for a lamplighter truncation of size ``m`` is fixed as
``x^0 < x^1 < ... < x^(m-1) < t``; chain-level signs downstream depend on it.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import QMatrix, QVector, as_rat, format_rat, mat_rank


@dataclass(frozen=True, order=True)
class LampLabel:
    """Basis label: ``X(r)`` is the monomial x^r, ``T`` the generator t."""

    kind: str
    r: int = 0

    def __post_init__(self):
        if self.kind not in ("x", "t"):
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.r < 0 or (self.kind == "t" and self.r):
            raise ValueError("bad label exponent")

    @classmethod
    def X(cls, r: int) -> "LampLabel":
        return cls("x", r)

    @classmethod
    def T(cls) -> "LampLabel":
        return cls("t")

    def __str__(self):
        return f"x{self.r}" if self.kind == "x" else "t"


@dataclass(frozen=True)
class FinLieAlgebra:
    """Lie algebra given by the brackets ``[z_i, z_j]`` for ``i < j``.

    Only nonzero brackets are stored; ``[z_j, z_i] = -[z_i, z_j]`` is implied.
    """

    dim: int
    labels: tuple
    structure: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.labels) != self.dim:
            raise ValueError("need exactly one label per basis vector")
        for (i, j), v in self.structure.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"structure key ({i}, {j}) must satisfy 0 <= i < j < dim")
            if v and max(v.support()) >= self.dim:
                raise ValueError(f"bracket [{i}, {j}] leaves the algebra")

    def basis_bracket(self, i: int, j: int) -> QVector:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexError(f"basis index out of range for dim {self.dim}")
        if i == j:
            return QVector()
        if i < j:
            return self.structure.get((i, j), QVector())
        return -self.structure.get((j, i), QVector())

    def index(self, label) -> int:
        return self.labels.index(label)

    def with_bracket(self, i: int, j: int, value: QVector) -> "FinLieAlgebra":
        """Copy of this algebra with ``[z_i, z_j]`` replaced (``i < j``)."""
        structure = dict(self.structure)
        if value:
            structure[i, j] = value
        else:
            structure.pop((i, j), None)
        return FinLieAlgebra(self.dim, self.labels, structure)


def abelian_algebra(dim: int) -> FinLieAlgebra:
    return FinLieAlgebra(dim, tuple(f"z{i}" for i in range(dim)), {})


@functools.lru_cache(maxsize=64)
def build_lamplighter_truncation(m: int) -> FinLieAlgebra:
    """The quotient ``Q[x]/x^m ⋊ Qt`` with ``[x^r, t] = x^(r+1)``."""
    if m < 1:
        raise ValueError("truncation m must be at least 1")
    labels = tuple(LampLabel.X(r) for r in range(m)) + (LampLabel.T(),)
    t = m
    structure = {(r, t): QVector.unit(r + 1) for r in range(m - 1)}
    return FinLieAlgebra(m + 1, labels, structure)


def bracket(L: FinLieAlgebra, v: QVector, w: QVector) -> QVector:
    """Bilinear extension of the structure constants."""
    for u in (v, w):
        if u and max(u.support()) >= L.dim:
            raise IndexError(f"vector index outside algebra of dim {L.dim}")
    out: dict[int, Fraction] = {}
    for i, a in v.items():
        for j, b in w.items():
            if i == j:
                continue
            for k, c in L.basis_bracket(i, j).items():
                out[k] = out.get(k, 0) + a * b * c
    return QVector(out)


def verify_jacobi(L: FinLieAlgebra) -> bool:
    """Check the Jacobi identity on every basis triple ``i < j < k``."""
    e = [QVector.unit(i) for i in range(L.dim)]
    for i, j, k in itertools.combinations(range(L.dim), 3):
        total = (
            bracket(L, L.basis_bracket(i, j), e[k])
            + bracket(L, L.basis_bracket(j, k), e[i])
            + bracket(L, L.basis_bracket(k, i), e[j])
        )
        if total:
            return False
    return True


def derived_dimension(L: FinLieAlgebra) -> int:
    """``dim [L, L]``, the rank of all basis brackets."""
    cols = [L.basis_bracket(i, j) for i, j in itertools.combinations(range(L.dim), 2)]
    return mat_rank(QMatrix.from_columns(L.dim, cols))


# -- structure-constant text format ---------------------------------------

def export_structure(L: FinLieAlgebra) -> str:
    """Header ``dim label...`` then one ``i j k c`` line per nonzero constant."""
    lines = [" ".join([str(L.dim)] + [str(lab) for lab in L.labels])]
    for (i, j) in sorted(L.structure):
        for k, c in L.structure[i, j]:
            lines.append(f"{i} {j} {k} {format_rat(c)}")
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> FinLieAlgebra:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty structure file")
    dim, labels = int(lines[0][0]), tuple(lines[0][1:])
    acc: dict[tuple[int, int], dict[int, Fraction]] = {}
    for parts in lines[1:]:
        i, j, k, c = int(parts[0]), int(parts[1]), int(parts[2]), as_rat(parts[3])
        if i > j:
            i, j, c = j, i, -c
        acc.setdefault((i, j), {})[k] = acc.get((i, j), {}).get(k, 0) + c
    structure = {key: QVector(v) for key, v in acc.items()}
    return FinLieAlgebra(dim, labels, {k: v for k, v in structure.items() if v})


# -- the matrix model E(m) -------------------------------------------------

@dataclass(frozen=True)
class EMatrix:
    """Element of ``E(m)``: first row ``(0, b_0, ..., b_{m-1})`` and the
    constant value ``a`` on the superdiagonal below it."""

    m: int
    a: Fraction
    b: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if len(self.b) != self.m:
            raise ValueError(f"expected {self.m} first-row coefficients, got {len(self.b)}")
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", tuple(as_rat(x) for x in self.b))

    def expand(self) -> np.ndarray:
        """The ``(m+1) x (m+1)`` matrix as an object array of Fractions."""
        s = self.m + 1
        M = np.full((s, s), Fraction(0), dtype=object)
        M[0, 1:] = self.b
        for i in range(1, self.m):
            M[i, i + 1] = self.a
        return M

    def coordinates(self) -> tuple:
        """``(a, b_0, ..., b_{m-1})``, the coordinates in the basis A, B_0, ..."""
        return (self.a,) + self.b


def build_E_model(m: int) -> tuple[EMatrix, list[EMatrix]]:
    """The basis ``A`` (a=1, b=0) and ``B_r`` (a=0, b=e_r) of ``E(m)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    zero = (0,) * m
    A = EMatrix(m, 1, zero)
    B = [EMatrix(m, 0, tuple(int(i == r) for i in range(m))) for r in range(m)]
    return A, B


def commutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


def phi_images(m: int) -> list[np.ndarray]:
    """Images of the lamplighter basis: ``x^r -> B_r``, ``t -> A``."""
    A, B = build_E_model(m)
    return [Br.expand() for Br in B] + [A.expand()]


def phi_injective(m: int) -> bool:
    """Whether the images ``B_0, ..., B_{m-1}, A`` are linearly independent.

    Fails only at ``m = 1``, where ``A`` expands to the zero matrix.
    """
    images = phi_images(m)
    flat = QMatrix.from_columns((m + 1) ** 2, [QVector.from_dense(M.ravel()) for M in images])
    return mat_rank(flat) == len(images)


def phi_check(m: int, algebra: FinLieAlgebra | None = None) -> bool:
    """Whether ``x^r -> B_r, t -> A`` carries every basis bracket of
    ``algebra`` to the matrix commutator of the images.

    ``algebra`` defaults to the lamplighter truncation of size ``m``; passing
    a modified copy is how negative controls are run.
    """
    L = algebra if algebra is not None else build_lamplighter_truncation(m)
    images = phi_images(m)
    if L.dim != len(images):
        return False
    zero = np.full(images[0].shape, Fraction(0), dtype=object)
    for i, j in itertools.combinations(range(L.dim), 2):
        lhs = zero.copy()
        for k, c in L.basis_bracket(i, j).items():
            lhs = lhs + c * images[k]
        if not np.array_equal(lhs, commutator(images[i], images[j])):
            return False
    return True


def matrix_from_coordinates(coords: Sequence, m: int) -> np.ndarray:
    """Expand ``(a, b_0, ..., b_{m-1})`` to the matrix ``aA + sum b_r B_r``."""
    return EMatrix(m, coords[0], tuple(coords[1:])).expand()
