# Sieving the supersingular primes of y^2 = x^5 + 1 by quadratic residue
# conditions, next to the two bound curves.
import math

import numpy as np

from supersingular.census import HyperellipticCurve, census_scan
from supersingular.sieve import (
    BoundCase, FieldBudget, ScheduleCase, SieveConfig, chebotarev_budget, Li,
    param_schedule, schedule_primes, sieve_report, theorem_bound,
)

x = 3000
ell1, t = param_schedule(ScheduleCase.GENERIC, x)
primes = schedule_primes(ell1, t)
print(f"x = {x}: ell1 = {ell1:.3f}, t = {t}, sieving primes {primes}")

recs = census_scan(HyperellipticCurve.parse("f: 1,0,0,0,0,1"), x)
members = [r.p for r in recs if r.cls.is_supersingular]
rep = sieve_report(members, SieveConfig(x=x, primes=primes))
for k, v in rep.as_dict().items():
    print(f"  {k:15s} {v}")

print("\n        x      generic      rm/qm   ratio")
for x in np.logspace(2, 12, 6):
    a, b = theorem_bound(BoundCase.GENERIC, x), theorem_bound(BoundCase.RM_OR_QM, x)
    print(f"{x:9.0e} {a:12.4g} {b:10.4g} {a / b:7.3f}")

fb = FieldBudget(4, 4, 1, 0.0, (2, 3), 6)
for x in (1e2, 1e4, 1e6):
    print(x, chebotarev_budget(fb, 1, 4, x), " Li =", round(Li(x), 3))
