"""
The resolution map R_X[1] -> I_X on a node
==========================================

Take the node {xy = 0}: two branches through the origin.  The constant
sheaf shifted by one, R_X[1], and the intersection complex I_X are both
perverse, and there is a natural map T between them.  Here we factor T
over the integers and look at what its kernel, image and cokernel are.
"""

from pervcalc.functors import Location, stalk_cohomology, support
from pervcalc.gallery import gallery
from pervcalc.perv import find_isomorphism, morphism_classify, perv_factorization

# the gallery ships the map together with its source and target
T = gallery("t_resolution").value
print("source:", T.source)
print("target:", T.target)

# the kernel is a skyscraper at the origin, and T is onto
F = perv_factorization(T)
print("kernel  :", F.kernel)
M = gallery("m_shift").value
print("kernel is M[1]?", find_isomorphism(F.kernel, M).verdict)
print("image   :", F.image)
print("cokernel:", F.cokernel)
print("support of the kernel:", support(F.kernel))
print(morphism_classify(T))

# stalks at the singular point show where the kernel comes from
for P, label in ((T.source, "R_X[1]"), (T.target, "I_X")):
    st = stalk_cohomology(P, Location.origin())
    print(f"{label} at the origin:", {k: str(v) for k, v in st.groups.items()})
