# Chevalley-Eilenberg homology of the truncations, computed exactly over Q.
from lamplighter.ce import Chain, ce_differential, homology_representatives, homology_table
from lamplighter.lie import build_lamplighter_truncation

# %% Betti numbers for small truncations
for m in range(1, 8):
    L = build_lamplighter_truncation(m)
    print(m, [row["dim"] for row in homology_table(L)])

# %% the two-term formula d(s x^r ∧ s x^s ∧ s t) = s x^(r+1) ∧ s x^s + s x^r ∧ s x^(s+1)
L = build_lamplighter_truncation(8)
t = L.dim - 1
print(ce_differential(L, Chain.monomial((1, 4, t))).to_json())

# %% explicit H_2 classes; s x^0 ∧ s x^3 shows up at m = 4
for c in homology_representatives(build_lamplighter_truncation(4), 2):
    print(c.to_json())
