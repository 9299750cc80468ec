"""The +-1 matrix indexed by sign vectors squares to a multiple of the
identity, which is what lets the mixed L-functions be solved back into
products of plus/minus ones."""

import numpy as np

from sympow_padic import sign_matrix

for rt in range(1, 6):
    A = np.array(sign_matrix(rt).entries)
    n = A.shape[0]
    ok = (A == A.T).all() and (A @ A == n * np.eye(n, dtype=int)).all()
    print(f"rt={rt}: {n}x{n}, symmetric and A^2 = {n} I: {ok}")

print(np.array(sign_matrix(2).entries))
