# Weight strata V(q, n) of pure-x chains and the injectivity of
# α -> d(α ∧ st), which is what makes every H_q (q >= 2) of the completion large.
from lamplighter.linalg import mat_rank
from lamplighter.strata import (
    boundary_identity, check_lemma, d_stratum, enumerate_stratum, theorem_report, verify_square,
    witness_not_boundary,
)

# %% the length-2 strata and their maps
for n in range(1, 9):
    D = d_stratum(2, n)
    print(f"V(2,{n}) -> V(2,{n + 1}): {D.cols} -> {D.rows}, rank {mat_rank(D)}")

# %% s x^0 ∧ s x^(2n) is an explicit boundary; s x^0 ∧ s x^(odd) is not
print([boundary_identity(n) for n in range(1, 6)])
print([witness_not_boundary(2, r) for r in (1, 3, 5, 7)])

# %% the E/W splitting and the two shift squares
print(enumerate_stratum(3, 6, "E").elements, enumerate_stratum(3, 6, "W").elements)
print("phi square:", verify_square(3, 12, "phi"), "psi square:", verify_square(3, 12, "psi"))

# %% full sweep and the witness families (0, 1, ..., q-2, q^2+1+2k)
print("injectivity q<=6, n<=40:", check_lemma(6, 40)["passed"])
rep = theorem_report(4, r_max=-1)
for rec in rep["records"]:
    print(rec["witness"], rec["not_boundary"])
