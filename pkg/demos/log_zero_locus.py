"""Where does log^+_2 vanish?  Probe it at p = 3 on characters up to
conductor 3^4 and print which probes sit below the precision floor."""

from sympow_padic import AlgebraConfig
from sympow_padic.special import log_zero_locus

cfg = AlgebraConfig(3, 16, 400)

for sign in "+-":
    print(f"log^{sign}_2")
    for probe in log_zero_locus(sign, 2, cfg, c_max=4):
        mark = "zero" if probe.zero else "    "
        tag = "listed" if probe.listed else ""
        print(f"  c={probe.c} j={probe.j}  {mark}  v={probe.valuation}  {tag}")
