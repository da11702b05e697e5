"""Weight strata of the pure-x chains of the lamplighter algebra.

A pure-x monomial ``s x^{i1} ∧ ... ∧ s x^{iq}`` is written as the increasing
exponent tuple ``(i1, ..., iq)`` and its weight is ``i1 + ... + iq``.  The
span of weight-n tuples of length q is ``V(q, n)``; it splits as ``W(q, n)``
(least exponent at least 1) plus ``E(q, n)`` (least exponent 0).

The map studied here is ``α -> d(α ∧ st)``, which raises the weight by one.
Its matrices are always produced by the general Chevalley-Eilenberg
differential inside a large enough truncation; no sign is written by hand.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterator

from .ce import Chain, ce_differential
from .lie import build_lamplighter_truncation
from .linalg import QMatrix, QVector, in_image, mat_rank, solve

XSeq = tuple  # strictly increasing exponents

PARTS = ("V", "W", "E")


def weight(seq: XSeq) -> int:
    return sum(seq)


def _distinct_parts(q: int, n: int, lo: int) -> Iterator[tuple[int, ...]]:
    if q == 0:
        if n == 0:
            yield ()
        return
    # smallest possible sum of q increasing values starting at i is q*i + q(q-1)/2
    i = lo
    while q * i + q * (q - 1) // 2 <= n:
        for rest in _distinct_parts(q - 1, n - i, i + 1):
            yield (i,) + rest
        i += 1


@dataclass(frozen=True)
class StratumBasis:
    q: int
    n: int
    part: str
    elements: tuple
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {e: k for k, e in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def vector(self, seq: XSeq) -> QVector:
        return QVector.unit(self.index[tuple(seq)])


@functools.lru_cache(maxsize=None)
def enumerate_stratum(q: int, n: int, part: str = "V") -> StratumBasis:
    """Lexicographic basis of ``V``, ``W`` or ``E`` at length q and weight n."""
    if q < 1:
        raise ValueError("q must be at least 1")
    if part not in PARTS:
        raise ValueError(f"part must be one of {PARTS}")
    elems = tuple(_distinct_parts(q, n, 0)) if n >= 0 else ()
    if part == "W":
        elems = tuple(e for e in elems if e[0] >= 1)
    elif part == "E":
        elems = tuple(e for e in elems if e[0] == 0)
    return StratumBasis(q, n, part, elems)


def _ambient(n: int, m: int | None) -> int:
    if m is None:
        return max(n + 2, 1)
    if m <= n + 1:
        raise ValueError(f"truncation m={m} too small for weight {n}; need m > {n + 1}")
    return m


@functools.lru_cache(maxsize=None)
def d_stratum(q: int, n: int, m: int | None = None) -> QMatrix:
    """Matrix of ``α -> d(α ∧ st)`` from ``V(q, n)`` to ``V(q, n+1)``.

    Computed in the truncation of size ``m`` (default ``n + 2``), which must
    exceed ``n + 1`` so that no exponent in the target is cut off.
    """
    m = _ambient(n, m)
    L = build_lamplighter_truncation(m)
    t = L.dim - 1
    src = enumerate_stratum(q, n)
    tgt = enumerate_stratum(q, n + 1)
    entries = {}
    for j, seq in enumerate(src):
        image = ce_differential(L, Chain.monomial(seq + (t,)))
        for mono, c in image.terms.items():
            if t in mono or weight(mono) != n + 1:
                raise AssertionError(f"d({seq} ∧ st) produced off-stratum term {mono}")
            entries[tgt.index[mono], j] = c
    return QMatrix(len(tgt), len(src), entries)


def _positions(q: int, n: int, part: str) -> list[int]:
    V = enumerate_stratum(q, n)
    sub = enumerate_stratum(q, n, part)
    return [V.index[e] for e in sub]


def d_W(q: int, n: int) -> QMatrix:
    """``d`` restricted to ``W(q, n)`` with target ``W(q, n+1)``."""
    return d_stratum(q, n).submatrix(_positions(q, n + 1, "W"), _positions(q, n, "W"))


def rho_d(q: int, n: int) -> QMatrix:
    """``ρ∘d`` on ``E(q, n)``: apply d, then keep only the E-coordinates."""
    return d_stratum(q, n).submatrix(_positions(q, n + 1, "E"), _positions(q, n, "E"))


# -- shift isomorphisms ---------------------------------------------------

def phi(seq: XSeq) -> XSeq:
    """``W(q, n) -> V(q, n - q)``: lower every exponent by one."""
    seq = tuple(seq)
    if not seq or seq[0] < 1:
        raise ValueError(f"{seq} is not in a W stratum")
    return tuple(i - 1 for i in seq)


def psi(seq: XSeq) -> XSeq:
    """``E(q, n) -> V(q-1, n-q+1)``: drop the leading 0, lower the rest by one."""
    seq = tuple(seq)
    if len(seq) < 2 or seq[0] != 0:
        raise ValueError(f"{seq} is not in an E stratum of length >= 2")
    return tuple(i - 1 for i in seq[1:])


def shift_phi(q: int, n: int) -> list[tuple[int, int]]:
    """Index pairing ``(k, l)``: the k-th element of W(q, n) maps to the
    l-th element of V(q, n - q)."""
    W = enumerate_stratum(q, n, "W")
    V = enumerate_stratum(q, n - q)
    return [(k, V.index[phi(e)]) for k, e in enumerate(W)]


def shift_psi(q: int, n: int) -> list[tuple[int, int]]:
    """Index pairing from E(q, n) to V(q - 1, n - q + 1)."""
    if q < 2:
        raise ValueError("psi needs q >= 2")
    E = enumerate_stratum(q, n, "E")
    V = enumerate_stratum(q - 1, n - q + 1)
    return [(k, V.index[psi(e)]) for k, e in enumerate(E)]


def _pairing_matrix(pairs, rows: int, cols: int) -> QMatrix:
    return QMatrix(rows, cols, {(l, k): 1 for k, l in pairs})


# Moving st past q factors versus q-1 factors: under α -> α ∧ st the E-block
# at length q and the full map at length q-1 differ by exactly this sign.
PSI_SQUARE_SIGN = -1


def verify_square(q: int, n: int, which: str, left: QMatrix | None = None,
                  right: QMatrix | None = None) -> bool:
    """Check a shift square entrywise.

    ``which="phi"``:  φ∘d_W = d∘φ as maps W(q, n) -> V(q, n+1-q).
    ``which="psi"``:  ψ∘(ρ∘d) = PSI_SQUARE_SIGN · d∘ψ as maps
    E(q, n) -> V(q-1, n-q+2).

    ``left`` and ``right`` override the vertical maps (the W/E block and the
    shifted full map); they exist for negative controls.
    """
    if q < 2:
        raise ValueError("squares are defined for q >= 2")
    if which == "phi":
        top, bottom = shift_phi(q, n), shift_phi(q, n + 1)
        src_n, src_q, sign = n - q, q, 1
        L = d_W(q, n) if left is None else left
        dims = len(enumerate_stratum(q, n, "W")), len(enumerate_stratum(q, n + 1, "W"))
    elif which == "psi":
        top, bottom = shift_psi(q, n), shift_psi(q, n + 1)
        src_n, src_q, sign = n - q + 1, q - 1, PSI_SQUARE_SIGN
        L = rho_d(q, n) if left is None else left
        dims = len(enumerate_stratum(q, n, "E")), len(enumerate_stratum(q, n + 1, "E"))
    else:
        raise ValueError("which must be 'phi' or 'psi'")
    R = d_stratum(src_q, src_n) if right is None else right
    v_src = len(enumerate_stratum(src_q, src_n))
    v_tgt = len(enumerate_stratum(src_q, src_n + 1))
    if len(top) != v_src or len(bottom) != v_tgt:
        return False  # shift is not a bijection
    P_top = _pairing_matrix(top, v_src, dims[0])
    P_bottom = _pairing_matrix(bottom, v_tgt, dims[1])
    return P_bottom @ L == (R @ P_top).scale(sign)


# -- lemma checks ----------------------------------------------------------

def stratum_record(q: int, n: int) -> dict:
    """Dimensions and ranks at one (q, n)."""
    dimV = len(enumerate_stratum(q, n))
    dimW = len(enumerate_stratum(q, n, "W"))
    dimE = len(enumerate_stratum(q, n, "E"))
    rank_dV = mat_rank(d_stratum(q, n))
    rank_dW = mat_rank(d_W(q, n))
    rank_rhodE = mat_rank(rho_d(q, n))
    return {
        "q": q, "n": n, "dimV": dimV, "dimW": dimW, "dimE": dimE,
        "rank_dV": rank_dV, "rank_dW": rank_dW, "rank_rhodE": rank_rhodE,
        "injective": rank_dV == dimV and rank_dW == dimW and rank_rhodE == dimE,
    }


def check_lemma(q_max: int = 6, n_max: int = 40) -> dict:
    """Injectivity of d on W, ρ∘d on E and d on V for 2 <= q <= q_max,
    1 <= n <= n_max, plus the length-2 isomorphism at odd weight."""
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    records, failures = [], []
    for q in range(2, q_max + 1):
        for n in range(1, n_max + 1):
            rec = stratum_record(q, n)
            ok = rec["injective"]
            if q == 2:
                rec["dimV_next"] = len(enumerate_stratum(2, n + 1))
                rec["isomorphism"] = rec["rank_dV"] == rec["dimV"] == rec["dimV_next"]
                if n % 2 == 1:
                    ok = ok and rec["isomorphism"]
            records.append(rec)
            if not ok:
                failures.append({"q": q, "n": n})
    return {"check": "injectivity", "q_max": q_max, "n_max": n_max,
            "records": records, "failures": failures, "passed": not failures}


def check_squares(q_max: int = 6, n_max: int = 40) -> dict:
    records, failures = [], []
    for q in range(2, q_max + 1):
        for n in range(1, n_max + 1):
            rec = {"q": q, "n": n, "phi": verify_square(q, n, "phi"),
                   "psi": verify_square(q, n, "psi")}
            records.append(rec)
            if not (rec["phi"] and rec["psi"]):
                failures.append({"q": q, "n": n})
    return {"check": "squares", "q_max": q_max, "n_max": n_max, "psi_sign": PSI_SQUARE_SIGN,
            "records": records, "failures": failures, "passed": not failures}


def boundary_identity(n: int) -> bool:
    """``s x^0 ∧ s x^(2n) = d(Σ_{i<n} (-1)^i s x^i ∧ s x^(2n-i-1) ∧ s t)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    L = build_lamplighter_truncation(2 * n + 2)
    t = L.dim - 1
    pre = Chain.zero(3)
    for i in range(n):
        pre = pre + Chain.monomial((i, 2 * n - i - 1, t), (-1) ** i)
    return ce_differential(L, pre) == Chain.monomial((0, 2 * n))


def h2_cokernel(p: int) -> dict:
    """Cokernel of ``d: V(2, p-1) -> V(2, p)`` and whether ``(0, p)`` is hit."""
    D = d_stratum(2, p - 1)
    dimV = len(enumerate_stratum(2, p))
    coker = dimV - mat_rank(D)
    hit = in_image(D, enumerate_stratum(2, p).vector((0, p)))
    return {"p": p, "dimV": dimV, "coker": coker, "x0_xp_boundary": hit}


def lemma3_report(n_max: int = 40) -> dict:
    """Length-2 strata: dimensions, injectivity, odd isomorphisms, cokernels."""
    failures = []
    dims = []
    for k in range(1, (n_max + 1) // 2 + 1):
        even, odd = len(enumerate_stratum(2, 2 * k)), len(enumerate_stratum(2, 2 * k + 1))
        dims.append({"n": k, "dimV_even": even, "dimV_odd": odd})
        if even != k or odd != k + 1:
            failures.append({"dims": k})
    maps = []
    for n in range(1, n_max + 1):
        D = d_stratum(2, n)
        r = mat_rank(D)
        rec = {"n": n, "dim_source": D.cols, "dim_target": D.rows, "rank": r,
               "injective": r == D.cols, "isomorphism": r == D.cols == D.rows}
        maps.append(rec)
        if not rec["injective"] or (n % 2 == 1 and not rec["isomorphism"]):
            failures.append({"n": n})
    cokernels = []
    for p in range(1, n_max + 2):
        rec = h2_cokernel(p)
        if p % 2:
            rec["passed"] = rec["coker"] == 1 and not rec["x0_xp_boundary"]
        else:
            rec["passed"] = rec["coker"] == 0
        cokernels.append(rec)
        if not rec["passed"]:
            failures.append({"p": p})
    identities = [{"n": n, "holds": boundary_identity(n)} for n in range(1, 11)]
    failures += [{"identity": r["n"]} for r in identities if not r["holds"]]
    return {"check": "lemma3", "n_max": n_max, "dimensions": dims, "maps": maps,
            "cokernels": cokernels, "boundary_identities": identities,
            "failures": failures, "passed": not failures}


def witness(q: int, r: int) -> XSeq:
    if q < 2:
        raise ValueError("q must be at least 2")
    if r <= q - 2:
        raise ValueError(f"need r > q - 2, got r={r}, q={q}")
    if (q + r) % 2 == 0:
        raise ValueError(f"need q + r odd, got q={q}, r={r}")
    return tuple(range(q - 1)) + (r,)


def witness_not_boundary(q: int, r: int, m: int | None = None) -> bool:
    """True iff ``(0, 1, ..., q-2, r)`` is a cycle and no ``d(β ∧ st)`` hits it.

    ``m`` picks the ambient truncation (default: smallest admissible).
    """
    w = witness(q, r)
    n = weight(w)
    m = _ambient(n - 1, m)
    L = build_lamplighter_truncation(m)
    if ce_differential(L, Chain.monomial(w)):
        return False
    target = enumerate_stratum(q, n).vector(w)
    return not in_image(d_stratum(q, n - 1, m), target)


def boundary_preimage(q: int, n: int, seq: XSeq) -> QVector | None:
    """Preimage of ``seq`` under ``d: V(q, n-1) -> V(q, n)``, if one exists."""
    return solve(d_stratum(q, n - 1), enumerate_stratum(q, n).vector(seq))


def theorem_report(q_max: int = 5, r_max: int = 25, extra_k: int = 3,
                   truncation_offsets: tuple = (0, 3, 8)) -> dict:
    """Witness classes ``(0, ..., q-2, r)`` for ``r = q^2+1+2k`` (k < extra_k)
    and every admissible ``r <= r_max``, each checked in three truncations."""
    records, failures = [], []
    for q in range(2, q_max + 1):
        rs = {q * q + 1 + 2 * k for k in range(extra_k)}
        rs |= {r for r in range(q - 1, r_max + 1) if (q + r) % 2 == 1}
        for r in sorted(rs):
            w = witness(q, r)
            base = weight(w) + 1
            ms = [base + off for off in truncation_offsets]
            results = [witness_not_boundary(q, r, m) for m in ms]
            rec = {"q": q, "r": r, "witness": list(w), "weight": weight(w),
                   "truncations": ms, "not_boundary": all(results)}
            records.append(rec)
            if not all(results):
                failures.append({"q": q, "r": r})
    return {"check": "theorem", "q_max": q_max, "r_max": r_max,
            "records": records, "failures": failures, "passed": not failures}
