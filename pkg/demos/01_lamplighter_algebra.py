# The lamplighter Lie algebra L = Q[x] ⋊ Qt, truncated to Q[x]/x^m ⋊ Qt,
# and its matrix model E(m) inside the strictly upper triangular matrices.
from lamplighter.lie import (
    build_E_model, build_lamplighter_truncation, commutator, derived_dimension,
    export_structure, phi_check, verify_jacobi,
)

m = 4
L = build_lamplighter_truncation(m)

# %% basis x^0 < ... < x^(m-1) < t, the only brackets are [x^r, t] = x^(r+1)
print(export_structure(L))
print("Jacobi:", verify_jacobi(L))
print("dim [L, L] =", derived_dimension(L), "so the abelianization has dim", L.dim - derived_dimension(L))

# %% the matrices A and B_r
A, B = build_E_model(m)
print("A =\n", A.expand())
print("B_0 =\n", B[0].expand())
print("[B_0, A] == B_1:", (commutator(B[0].expand(), A.expand()) == B[1].expand()).all())

# %% x^r -> B_r, t -> A carries brackets to commutators
for k in range(1, 9):
    print(f"m={k}: bracket preserving = {phi_check(k)}")
