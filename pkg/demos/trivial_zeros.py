"""Trivial zeros of the symmetric square and fifth power at p = 5, next to
a brute-force scan of the interpolation factors."""

from sympow_padic import build_context, locate_trivial_zeros
from sympow_padic.lfactory import enumerate_signs
from sympow_padic.zeros import brute_force_zeros, vanishing_order

for m, alpha in ((2, None), (5, "+")):
    ctx = build_context(5, 3, m, -1, alpha)
    print(f"m={m}, k=3")
    for s in enumerate_signs(ctx.rt):
        recs = locate_trivial_zeros(ctx, s)
        brute = brute_force_zeros(ctx, s)
        same = sorted(r.j for r in recs) == sorted(r.j for r in brute)
        pts = ", ".join(f"({r.component},{r.theta},j={r.j})" for r in recs) or "none"
        print(f"  {str(s):<6} {pts}   brute force agrees: {same}")

ctx = build_context(5, 2, 4)
for s in enumerate_signs(ctx.rt):
    print(f"m=4 {s}: order at 1 {vanishing_order(ctx, s, 1, 1)}, at 0 {vanishing_order(ctx, s, 0, 0)}")
