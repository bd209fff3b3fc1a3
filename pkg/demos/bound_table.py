"""Upper bounds on the minimal weight for c = 1/2 .. 48."""

import sys
from fractions import Fraction

from svoachar import bounds

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 4
for r in bounds.table_sweep(Fraction(1, 2), 48, Fraction(1, 2), workers=workers):
    note = "  (classification-dependent)" if r.annotation != "none" else ""
    print(f"c = {str(r.c):>5}   minimal weight <= {r.analytic_mu_max}{note}")
