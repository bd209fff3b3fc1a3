"""Why no self-dual SVOA at c = 67/2 has minimal weight above 3/2.

Prints the free coefficient's linear forms and the replayed certificate.
"""

from fractions import Fraction

from svoachar import bounds
from svoachar.feasibility import replay
from svoachar.svoa import character, shadow

c, mu = Fraction(67, 2), Fraction(3, 2)
system = bounds.build_system(c, mu)
print("fixed coefficients a0..a3:", ", ".join(str(a) for a in system.spec.a[:4]))

chi = character(system.spec, 48 * 3)
sh = shadow(system.spec, 48 * 2)
print("C_4 =", chi.coeff_at_tick(-67 + 96))
print("C_5 =", chi.coeff_at_tick(-67 + 120))
print("B_0 =", sh.coeff_at_tick(-58))
print("B_1 =", sh.coeff_at_tick(-10))

res = bounds.test_min_weight_exceeds(c, mu)
print("\nverdict:", res.status)
for step in res.certificate:
    print("  ", step.description)
print("replayed:", replay(res.certificate))
