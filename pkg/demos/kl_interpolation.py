"""Build the Kubota-Leopoldt element for chi_{-4} at p = 5 and compare a
handful of its specialisations with generalized Bernoulli numbers.

    python3 demos/kl_interpolation.py
"""

from sympow_padic import AlgebraConfig, PadicCharacter, kl_element, verify_interpolation
from sympow_padic.kubota import DirichletCharacter, dirichlet_L_nonpos

p = 5
cfg = AlgebraConfig(p, 8, 24)
eta = DirichletCharacter.parse("-4")

L = kl_element(eta, cfg, level=6)  # a few seconds
print(f"L_eta built: {sum(L.poles)} pole branches, tail {L.tail}")

for j in (0, -2, -4):
    lam = PadicCharacter(0, 0, 0, j)  # b + j even, as the parity rule wants
    res = verify_interpolation(L, eta, lam, prec=4)
    print(f"  j={j:>2}  L(chi_-4, {j}) = {dirichlet_L_nonpos(eta, j)!s:>8}   {res.describe()}")

# a point of conductor 25; the comparison happens in Z_5[zeta_5]
lam = PadicCharacter(0, 2, 1, -2)
print("  wild", verify_interpolation(L, eta, lam, prec=4).describe())
