# A tour of the conjugacy sets inside GL2, GSp4 and the fibre product.
from supersingular.groups import verify
from supersingular.groups.core import (
    ConjSetId, Family, GroupElement, all_conj_ids, conjugate_into_borel,
    group_order, in_conj_set, quotient_image_size, Subgroup, witness,
)

for fam, ell in [(Family.GL2QM, 5), (Family.FIBER, 5), (Family.GSP4, 3)]:
    sizes = {s.value: group_order(fam, s, ell) for s in Subgroup}
    print(fam.value, ell, sizes)

# witnesses are companion blocks of X^2 + aX + mu, X^2 - aX + mu
w = witness(ConjSetId(Family.GSP4, 1), 73)
print("\nGSp4 witness for set 1 at ell = 73, multiplier", w.mu)
for row in w.entries:
    print("   ", row)
print("in set:", in_conj_set(w, ConjSetId(Family.GSP4, 1)))

# conjugate into the Borel
m = GroupElement.gl2([[0, 4], [1, 0]], 5)
g, b = conjugate_into_borel(m)
print("\n", m.entries, "-> g =", g.entries, " g^-1 m g =", b.entries)

# the closure U'.C in C only holds on the Borel part
u = GroupElement.gl2([[1, 1], [0, 1]], 5)
s = GroupElement.gl2([[0, 1], [1, 0]], 5)
cid = ConjSetId(Family.GL2QM, 4)
print("\nswap matrix in C4:", in_conj_set(s, cid), "  u * swap in C4:", in_conj_set(u * s, cid))
print(verify.check_closure_exhaustive(cid, 7, borel_only=True))

print("\nquotient image sizes at ell = 73 and 97")
for cid in all_conj_ids():
    print(f"  {str(cid):10s} {quotient_image_size(cid, 73)} {quotient_image_size(cid, 97)}")
