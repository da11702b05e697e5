"""Exit criteria.  Arithmetic is exact, so every comparison is equality."""
import random

import numpy as np
import pytest

from lamplighter import ce, lie, malcev, strata
from lamplighter.linalg import mat_rank

from conftest import ACCEPTANCE_LINES

SEED = 20240101


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def injectivity():
    return strata.check_lemma(6, 40)


@pytest.fixture(scope="module")
def squares():
    return strata.check_squares(6, 40)


@pytest.fixture(scope="module")
def witnesses():
    return strata.theorem_report(5, r_max=25, extra_k=3)


def test_01_stratum_dimensions():
    bad = [n for n in range(1, 21)
           if len(strata.enumerate_stratum(2, 2 * n)) != n
           or len(strata.enumerate_stratum(2, 2 * n + 1)) != n + 1]
    report(1, "dim V(2,2n) = n, dim V(2,2n+1) = n+1 for n <= 20", not bad, f"failures={bad}")


def test_02_vanishing_bound():
    bad = [(q, n) for q in range(2, 9) for n in range(q * (q - 1) // 2)
           if len(strata.enumerate_stratum(q, n))]
    # the bound is sharp: (0, 1, ..., q-1) has weight q(q-1)/2
    sharp = all(len(strata.enumerate_stratum(q, q * (q - 1) // 2)) == 1 for q in range(2, 9))
    report(2, "V(q,n) = 0 for n < q(q-1)/2, q <= 8", not bad and sharp, f"failures={bad}")


def test_03_lemma3_injective_and_odd_iso():
    bad = []
    for n in range(1, 41):
        D = strata.d_stratum(2, n)
        r = mat_rank(D)
        if r != D.cols or (n % 2 and r != D.rows):
            bad.append(n)
    report(3, "d: V(2,n) -> V(2,n+1) injective, iso for odd n, n <= 40", not bad, f"failures={bad}")


def test_04_lemma3_cokernels_and_boundary_identity():
    bad = []
    for p in range(1, 42):
        rec = strata.h2_cokernel(p)
        if p % 2:
            ok = rec["coker"] == 1 and not rec["x0_xp_boundary"]
        else:
            ok = rec["coker"] == 0
        if not ok:
            bad.append(p)
    ids = [n for n in range(1, 11) if not strata.boundary_identity(n)]
    report(4, "coker dims 1/0 by parity with (0,p) generating, boundary identity n <= 10",
           not bad and not ids, f"coker failures={bad}, identity failures={ids}")


def test_05_lemma4_and_squares(injectivity, squares):
    bad = [(r["q"], r["n"]) for r in injectivity["records"]
           if r["rank_dW"] != r["dimW"] or r["rank_rhodE"] != r["dimE"]]
    sq = squares["failures"]
    report(5, "d on W and rho∘d on E full column rank; both squares commute, q <= 6, n <= 40",
           not bad and not sq and len(injectivity["records"]) == 5 * 40,
           f"rank failures={bad}, square failures={sq}, psi sign={squares['psi_sign']}")


def test_06_lemma5_injective(injectivity):
    bad = [(r["q"], r["n"]) for r in injectivity["records"] if r["rank_dV"] != r["dimV"]]
    report(6, "d: V(q,n) -> V(q,n+1) injective, q <= 6, n <= 40", not bad, f"failures={bad}")


def test_07_witness_classes(witnesses):
    pairs = {(r["q"], r["r"]) for r in witnesses["records"]}
    required = {(q, q * q + 1 + 2 * k) for q in range(2, 6) for k in range(3)}
    required |= {(q, r) for q in range(2, 6) for r in range(q - 1, 26) if (q + r) % 2}
    three_m = all(len(set(r["truncations"])) == 3 for r in witnesses["records"])
    report(7, "(0,1,...,q-2,r) cycle and non-boundary, q <= 5, three truncations each",
           witnesses["passed"] and required <= pairs and three_m,
           f"{len(pairs)} witnesses, failures={witnesses['failures']}")


def test_08_ce_soundness():
    problems = []
    for m in range(1, 9):
        L = lie.build_lamplighter_truncation(m)
        for q in range(2, L.dim + 1):
            if not (ce.differential_matrix(L, q - 1) @ ce.differential_matrix(L, q)).is_zero():
                problems.append(("dd", m, q))
        table = ce.homology_table(L)
        chi_chains = sum((-1) ** r["q"] * r["chain_dim"] for r in table)
        chi_h = sum((-1) ** r["q"] * r["dim"] for r in table)
        if chi_chains != chi_h:
            problems.append(("euler", m))
        if m >= 2 and (table[0]["dim"], table[1]["dim"]) != (1, 2):
            problems.append(("h0h1", m))
    report(8, "d∘d = 0, Euler characteristic, H0 = 1 and H1 = 2 for m <= 8", not problems,
           f"problems={problems}")


def test_09_lemma1():
    problems = [m for m in range(1, 9) if not lie.phi_check(m)]
    for m in range(1, 9):
        A, B = lie.build_E_model(m)
        a = A.expand()
        b = [x.expand() for x in B]
        zero = 0 * a
        for r in range(m):
            if (a @ b[r]).any() or any((b[r] @ b[s]).any() for s in range(m)):
                problems.append(("product", m, r))
            expected = b[r + 1] if r <= m - 2 else zero
            if not np.array_equal(lie.commutator(b[r], a), expected):
                problems.append(("bracket", m, r))
    report(9, "phi preserves brackets, E(m) relations exact, m <= 8", not problems,
           f"problems={problems}")


def test_10_lemma2_and_malcev():
    problems = []
    for m in range(1, 9):
        rep = malcev.relations_report(m, m + 2)
        if not rep["passed"]:
            problems.append(("relations", m))
    rng = random.Random(SEED)
    for k in range(50):
        M = malcev.random_strict_triangular(1 + k % 7, rng)
        if malcev.mat_log(malcev.mat_exp(M)) != M:
            problems.append(("roundtrip", k))
    for s in range(1, 7):
        X = malcev.random_strict_triangular(s, rng)
        for Y in (X.scale(3), malcev.StrictTriangular.zero(s), -X):
            if malcev.bch(X, Y) != X + Y:
                problems.append(("bch", s))
    for m in range(1, 6):
        if not malcev.group_closure_probe(m, trials=100, seed=SEED):
            problems.append(("closure", m))
    report(10, "psi(a^(b^i)) and relators, exp/log round trip, commuting BCH, closure probe",
           not problems, f"problems={problems}")


def test_11_infinite_claims_reduced_to_finite_lemmas(injectivity, squares, witnesses):
    # Nothing here is finitely checkable beyond the lemmas the proofs rest on;
    # this criterion holds exactly when those suites hold.
    ok = injectivity["passed"] and squares["passed"] and witnesses["passed"]
    ok = ok and all(lie.phi_check(m) for m in range(1, 9))
    ok = ok and all(malcev.relations_report(m, m + 2)["passed"] for m in range(1, 9))
    report(11, "uncountability and the full limit accepted via the finite lemma suites", ok)
