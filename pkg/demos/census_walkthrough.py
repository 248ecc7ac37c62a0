# Supersingular primes of two genus-2 curves, counted by brute force.
#
# y^2 = x^5 + 1 has complex multiplication by Q(zeta_5), so its Jacobian is
# supersingular at every p = 2, 3, 4 mod 5 and ordinary at p = 1 mod 5.
# y^2 = x^5 - x + 1 has no such structure and supersingular primes are rare.
import collections

import numpy as np

from supersingular.census import HyperellipticCurve, census_scan, counting_functions, SSSplit, SSTotal

cm = HyperellipticCurve.parse("f: 1,0,0,0,0,1")
generic = HyperellipticCurve.parse("f: 1,0,0,0,-1,1")

print(cm, " disc =", cm.disc)
print(generic, " disc =", generic.disc, "(bad at 19 and 151)")

recs = census_scan(cm, 1000)
print("\nfirst few records of the CM curve")
print("p    n1     n2   a1    a2  class")
for r in recs[:8]:
    print(f"{r.p:<4} {r.n1:<6} {r.n2:<6} {r.a1:<4} {r.a2:<5} {r.cls.value}")

# class by residue of p mod 5
table = collections.defaultdict(collections.Counter)
for r in recs:
    table[r.p % 5][r.cls.value] += 1
print("\nclasses by p mod 5 (p <= 1000)")
for k in sorted(table):
    print(k, dict(table[k]))

print("\nsupersingular total:", counting_functions(recs, SSTotal()),
      " split:", counting_functions(recs, SSSplit()))

# the generic curve: Frobenius traces look roughly Sato-Tate, ss primes are scarce
g = census_scan(generic, 1000)
ss = [r.p for r in g if r.cls.is_supersingular]
print("\ny^2 = x^5 - x + 1, supersingular primes <= 1000:", ss or "none")
traces = np.array([r.a1 / np.sqrt(r.p) for r in g])
print("normalised a1: mean %.3f  std %.3f  min %.2f  max %.2f"
      % (traces.mean(), traces.std(), traces.min(), traces.max()))
hist, edges = np.histogram(traces, bins=8, range=(-4, 4))
for h, e in zip(hist, edges):
    print(f"{e:5.1f} {'#' * h}")
