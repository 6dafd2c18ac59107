"""
An endomorphism whose kernel and cokernel look alike
====================================================

Over a field, an endomorphism of a perverse sheaf has kernel and
cokernel with the same characteristic cycle.  Their stalks can still
differ, and the image need not be supported where one might hope.
"""

from pervcalc.checks import check_endo_theorem, check_image_variant
from pervcalc.functors import Location, characteristic_cycle, stalk_cohomology
from pervcalc.gallery import gallery
from pervcalc.linalg import QQ
from pervcalc.perv import find_isomorphism, perv_factorization

T = gallery("endo_example", QQ).value
F = perv_factorization(T)

for name in ("kernel", "image", "cokernel"):
    P = getattr(F, name)
    print(f"{name:9s} CC = {characteristic_cycle(P)}")

# same CC, but not isomorphic: the stalks at the origin disagree
print(find_isomorphism(F.kernel, F.cokernel).verdict)
for name in ("kernel", "cokernel"):
    st = stalk_cohomology(getattr(F, name), Location.origin())
    print(name, {k: str(v) for k, v in st.groups.items()})

print(check_endo_theorem(T).verdict)
# the variant "supp im T = supp ker T" fails here, as expected
print(check_image_variant(T).verdict)
