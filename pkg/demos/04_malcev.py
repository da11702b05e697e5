# Finite stages of the Malcev correspondence: exp/log between U(s) and T(s),
# BCH as log(exp X exp Y), and the lamplighter group mapped into G(m) = exp(E(m)).
import random
from fractions import Fraction

from lamplighter.malcev import (
    GroupWord, StrictTriangular, bch, group_closure_probe, lamplighter_relator, mat_exp, mat_log,
    psi_eval, random_strict_triangular,
)

# %% exp and log are inverse polynomial maps
rng = random.Random(0)
X = random_strict_triangular(4, rng)
print(X.to_json())
print(mat_log(mat_exp(X)) == X)

# %% BCH in the Heisenberg case: X * Y = X + Y + [X, Y]/2
X = StrictTriangular([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
Y = StrictTriangular([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
print(bch(X, Y).to_json(), (X + Y + X.bracket(Y).scale(Fraction(1, 2))).to_json())

# %% psi(b) = exp(-A), psi(a) = 1 + B_0 kills every relator [a, b^i a b^-i]
m = 5
print(psi_eval(GroupWord.parse("b^2 a b^-2"), m).to_json())
print(all(psi_eval(lamplighter_relator(i), m).to_json() == psi_eval("", m).to_json() for i in range(-7, 8)))

# %% exp(E(m)) is closed under products
print(group_closure_probe(m, trials=20, seed=1))
