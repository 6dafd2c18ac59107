"""
Seeded fuzzing and replaying a trial
====================================

Every fuzz trial draws its inputs from a seed derived from the run seed
and the trial number, so any single trial can be rerun in isolation.
"""

from pervcalc.checks import fuzz, run_trial
from pervcalc.linalg import QQ, ZZ, Ring

for ring in (ZZ, QQ, Ring.fp(5)):
    rep = fuzz("all", 25, ring, 4, seed=7)
    print(ring, rep.verdict, {s.suite: s.verdict for s in rep.subreports})

# replay trial 3 of the support suite over Z on its own
from pervcalc.rng import derive_seed

trial_seed = derive_seed(7, 3)
print(run_trial("support", ZZ, 4, trial_seed).verdict)
