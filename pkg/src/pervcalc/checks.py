"""Executable checks of the support, corollary, endomorphism, eigenvalue and
characteristic-cycle statements, plus a seeded fuzz driver.

Every report carries enough to replay it: suite, ring, seed, trial count,
and for a failure the per-trial seed and the offending morphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import io
from .errors import InputError
from .functors import (
    Location,
    SupportSet,
    characteristic_cycle,
    induced_stalk_maps,
    isolating_map,
    locations,
    stalk_cohomology,
    support,
)
from .generators import random_endo, random_morphism, random_object
from .linalg import FGModule, Matrix, ModuleMap, Ring, determinant, eigen_kernel, module_leq
from .perv import (
    PervFactorization,
    PervMorphism,
    PervObject,
    _check_morphism,
    morphism_classify,
    perv_factorization,
)
from .rng import SplitMix64, derive_seed

PASS = "pass"
FAIL = "fail"
COUNTEREXAMPLE = "expected-counterexample-confirmed"
UNSUPPORTED = "unsupported"

MODES = ("ker", "im", "coker")
SUITES = ("support", "corollary", "endo", "eigen", "cc")
BRANCH_CHOICES = (1, 2, 2, 3)


@dataclass
class CheckReport:
    suite: str
    verdict: str
    ring: str = ""
    trials: int = 1
    seed: int | None = None
    details: dict = field(default_factory=dict)
    witness: dict | None = None
    subreports: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, COUNTEREXAMPLE)

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "verdict": self.verdict,
            "ring": self.ring,
            "trials": self.trials,
            "seed": self.seed,
            "details": self.details,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.subreports:
            out["subreports"] = [s.to_json() for s in self.subreports]
        return out

    def summary_lines(self) -> list[str]:
        head = f"{self.suite}: {self.verdict} (ring {self.ring}, trials {self.trials}, seed {self.seed})"
        lines = [head]
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        if self.witness is not None:
            w = {k: v for k, v in self.witness.items() if k != "morphism"}
            lines.append(f"  witness: {w}")
        for s in self.subreports:
            lines.extend("  " + line for line in s.summary_lines())
        return lines


def _mode_module(f: ModuleMap, mode: str) -> FGModule:
    return {"ker": f.kernel, "im": f.image, "coker": f.cokernel}[mode]()


def _mode_object(F: PervFactorization, mode: str) -> PervObject:
    return {"ker": F.kernel, "im": F.image, "coker": F.cokernel}[mode]


def _fail(suite: str, T: PervMorphism, **info) -> CheckReport:
    witness = {k: str(v) for k, v in info.items()}
    witness["morphism"] = io.morphism_to_json(T)
    return CheckReport(suite, FAIL, str(T.ring), witness=witness)


def check_support_theorem(T: PervMorphism, mode: str) -> CheckReport:
    """Support of ker/im/coker against the isolating maps, plus generic stalks."""
    if mode not in MODES:
        raise InputError(f"check_support_theorem: mode must be one of {MODES}")
    _check_morphism(T, "check_support_theorem")
    suite = f"support[{mode}]"
    F = perv_factorization(T, check=False)
    obj = _mode_object(F, mode)
    lhs = support(obj)
    origin_mod = _mode_module(isolating_map(T, Location.origin()), mode)
    rhs = SupportSet.closure([not _mode_module(a, mode).is_zero() for a in T.a],
                             not origin_mod.is_zero())
    if lhs != rhs:
        return _fail(suite, T, item="1", lhs=lhs, rhs=rhs)
    for loc, d in lhs.components():
        st = stalk_cohomology(obj, loc)
        if not st[0 if d == 1 else -1].is_zero():
            return _fail(suite, T, item="2", component=loc, reason="stalk outside degree -d")
        if d == 1:
            want = _mode_module(isolating_map(T, loc), mode)
            if st[-1] != want:
                return _fail(suite, T, item="2", component=loc, stalk=st[-1], isolating=want)
        else:
            if st[0] != origin_mod:
                return _fail(suite, T, item="2", component=loc, stalk=st[0], isolating=origin_mod)
            if not module_leq(st[0], origin_mod):
                return _fail(suite, T, item="2-min", component=loc, stalk=st[0], bound=origin_mod)
    return CheckReport(suite, PASS, str(T.ring), details={"support": str(lhs)})


def check_corollary(T: PervMorphism) -> CheckReport:
    _check_morphism(T, "check_corollary")
    flags = morphism_classify(T)
    maps = [isolating_map(T, loc) for loc in locations(T.branches)]
    local = {
        "injective": all(f.is_injective() for f in maps),
        "zero": all(f.is_zero() for f in maps),
        "surjective": all(f.is_surjective() for f in maps),
    }
    for k, v in local.items():
        if getattr(flags, k) != v:
            return _fail("corollary", T, property=k, perverse=getattr(flags, k), isolating=v)
    return CheckReport("corollary", PASS, str(T.ring),
                       details={k: getattr(flags, k) for k in ("injective", "surjective", "zero")})


def _stalk_mode_support(T: PervMorphism, mode: str) -> tuple[SupportSet, dict]:
    """Closure of the points where some stalk map has nonzero ker/im/coker."""
    origin = induced_stalk_maps(T, Location.origin()).maps
    origin_flag = any(not _mode_module(m, mode).is_zero() for m in origin.values())
    branch_flags = [not _mode_module(a, mode).is_zero() for a in T.a]
    return SupportSet.closure(branch_flags, origin_flag), origin


def _require_endo(T: PervMorphism, what: str) -> None:
    T.ring.require_field(what)
    if T.source != T.target:
        raise InputError(f"{what}: not an endomorphism")


def check_endo_theorem(T: PervMorphism) -> CheckReport:
    """Endomorphisms over a field: ker/coker supports and generic stalks
    read off the stalk maps directly; CC(ker) == CC(coker)."""
    _require_endo(T, "check_endo_theorem")
    _check_morphism(T, "check_endo_theorem")
    F = perv_factorization(T, check=False)
    for mode in ("ker", "coker"):
        obj = _mode_object(F, mode)
        lhs = support(obj)
        rhs, origin_maps = _stalk_mode_support(T, mode)
        if lhs != rhs:
            return _fail("endo", T, item=f"1[{mode}]", lhs=lhs, rhs=rhs)
        for loc, d in lhs.components():
            st = stalk_cohomology(obj, loc)
            other = 0 if d == 1 else -1
            if not st[other].is_zero():
                return _fail("endo", T, item=f"2[{mode}]", component=loc,
                             reason="stalk outside degree -d")
            want = _mode_module(T.a[loc.branch - 1], mode) if d == 1 else _mode_module(origin_maps[0], mode)
            if st[-d] != want:
                return _fail("endo", T, item=f"2[{mode}]", component=loc, stalk=st[-d], stalk_map=want)
    cc_k, cc_c = characteristic_cycle(F.kernel), characteristic_cycle(F.cokernel)
    if cc_k != cc_c:
        return _fail("endo", T, item="cc", cc_kernel=cc_k, cc_cokernel=cc_c)
    if support(F.kernel) != support(F.cokernel):
        return _fail("endo", T, item="cc-support")
    im_lhs = support(F.image)
    im_rhs, _ = _stalk_mode_support(T, "im")
    return CheckReport("endo", PASS, str(T.ring), details={
        "support_kernel": str(support(F.kernel)),
        "cc_kernel": str(cc_k),
        "image_variant_holds": im_lhs == im_rhs,
    })


def check_image_variant(T: PervMorphism) -> CheckReport:
    """The image analogue of the endomorphism statement, which is false in
    general.  A mismatch is reported as a confirmed counterexample; the
    statement holding on a known counterexample is a failure."""
    _require_endo(T, "check_image_variant")
    _check_morphism(T, "check_image_variant")
    F = perv_factorization(T, check=False)
    lhs = support(F.image)
    rhs, _ = _stalk_mode_support(T, "im")
    all_zero = all(m.image().is_zero() for loc in locations(T.branches)
                   for m in induced_stalk_maps(T, loc).maps.values())
    details = {"support_image": str(lhs), "stalk_image_support": str(rhs),
               "all_stalk_images_zero": all_zero}
    if lhs != rhs:
        return CheckReport("endo[im]", COUNTEREXAMPLE, str(T.ring), details=details)
    return CheckReport("endo[im]", FAIL, str(T.ring), details=details,
                       witness={"reason": "image variant held on the counterexample",
                                "morphism": io.morphism_to_json(T)})


def _candidate_lambdas(T: PervMorphism, extra=()):
    ring = T.ring
    if ring.tag == "fp":
        return list(ring.elements())
    cands = {ring.coerce(x) for x in range(-2, 3)}
    cands.update(ring.coerce(x) for x in extra)
    for f in list(T.a) + [T.b]:
        for i in range(min(f.matrix.shape)):
            cands.add(f.matrix[i, i])
    return sorted(cands)


def _is_char_root(f: ModuleMap, lam) -> bool:
    n = f.domain.ngens
    return n > 0 and determinant(Matrix.scalar(f.ring, n, lam) - f.matrix) == 0


def check_eigenvalue_remark(T: PervMorphism, lambdas=None) -> CheckReport:
    """For each lambda: the perverse kernel of lambda*id - T is nonzero iff some
    stalk map has lambda as an eigenvalue."""
    _require_endo(T, "check_eigenvalue_remark")
    _check_morphism(T, "check_eigenvalue_remark")
    ring = T.ring
    lams = _candidate_lambdas(T) if lambdas is None else [ring.coerce(x) for x in lambdas]
    stalk = [m for loc in locations(T.branches) for m in induced_stalk_maps(T, loc).maps.values()]
    component_eigs = []
    for lam in lams:
        # the perverse kernel of lam*id - T is computed componentwise
        comps = list(T.a) + [T.b]
        kers = [eigen_kernel(f, lam) for f in comps]
        perverse = not all(K.is_zero() for K in kers)
        local = any(not eigen_kernel(m, lam).is_zero() for m in stalk)
        if perverse != local:
            return _fail("eigen", T, lam=ring.format_element(lam), perverse=perverse, stalk=local)
        roots = [_is_char_root(f, lam) for f in comps]
        for K, root in zip(kers, roots):
            if root != (not K.is_zero()):
                return _fail("eigen", T, lam=ring.format_element(lam), item="char-poly")
        if perverse or any(roots):
            component_eigs.append(ring.format_element(lam))
    return CheckReport("eigen", PASS, str(ring), details={
        "lambdas_tested": len(lams), "eigenvalues": component_eigs})


def check_cc_properties(X) -> CheckReport:
    if isinstance(X, PervObject):
        X.ring.require_field("check_cc_properties")
        cc = characteristic_cycle(X)
        sup = support(X)
        if cc.underlying_set() != sup:
            return CheckReport("cc", FAIL, str(X.ring),
                               witness={"cc": str(cc), "support": str(sup), "object": io.object_to_json(X)})
        if cc.is_zero() != X.is_zero():
            return CheckReport("cc", FAIL, str(X.ring),
                               witness={"cc": str(cc), "object": io.object_to_json(X)})
        return CheckReport("cc", PASS, str(X.ring), details={"cc": str(cc), "support": str(sup)})
    if isinstance(X, PervFactorization):
        T = X.morphism
        T.ring.require_field("check_cc_properties")
        cK, cI, cC = (characteristic_cycle(o) for o in (X.kernel, X.image, X.cokernel))
        cP, cQ = characteristic_cycle(T.source), characteristic_cycle(T.target)
        if cP != cK + cI:
            return _fail("cc", T, sequence="0->K->P->I->0", source=cP, kernel=cK, image=cI)
        if cQ != cI + cC:
            return _fail("cc", T, sequence="0->I->Q->C->0", target=cQ, image=cI, cokernel=cC)
        for o in (X.kernel, X.image, X.cokernel):
            sub = check_cc_properties(o)
            if not sub.ok:
                return sub
        return CheckReport("cc", PASS, str(T.ring),
                           details={"cc_kernel": str(cK), "cc_image": str(cI), "cc_cokernel": str(cC)})
    raise InputError("check_cc_properties: expected an object or a factorization")


# -- fuzzing ------------------------------------------------------------------


def _trial_inputs(suite: str, ring: Ring, max_dim: int, trial_seed: int):
    rng = SplitMix64(trial_seed)
    r = rng.choice(BRANCH_CHOICES)
    P = random_object(ring, r, max_dim, rng.next_u64())
    if suite in ("endo", "eigen"):
        return random_endo(P, rng.next_u64())
    Q = random_object(ring, r, max_dim, rng.next_u64())
    return random_morphism(P, Q, rng.next_u64())


def run_trial(suite: str, ring: Ring, max_dim: int, trial_seed: int) -> CheckReport:
    """One fuzz trial; replayable from its arguments alone."""
    T = _trial_inputs(suite, ring, max_dim, trial_seed)
    if suite == "support":
        for mode in MODES:
            rep = check_support_theorem(T, mode)
            if not rep.ok:
                return rep
        return rep
    if suite == "corollary":
        return check_corollary(T)
    if suite == "endo":
        return check_endo_theorem(T)
    if suite == "eigen":
        return check_eigenvalue_remark(T)
    if suite == "cc":
        rep = check_cc_properties(T.source)
        if not rep.ok:
            return rep
        return check_cc_properties(perv_factorization(T, check=False))
    raise InputError(f"fuzz: unknown suite {suite!r}")


def _fuzz_one(suite: str, trials: int, ring: Ring, max_dim: int, seed: int) -> CheckReport:
    base = CheckReport(suite, PASS, str(ring), trials, seed)
    base.details["max_dim"] = max_dim
    if suite in ("endo", "eigen", "cc") and not ring.is_field:
        base.verdict = UNSUPPORTED
        base.details["reason"] = f"suite {suite} requires a field; ring {ring} is not one"
        return base
    passed = 0
    image_variant_failures = 0
    for k in range(trials):
        ts = derive_seed(seed, k)
        try:
            rep = run_trial(suite, ring, max_dim, ts)
        except (InputError, AssertionError, ArithmeticError) as e:
            rep = CheckReport(suite, FAIL, str(ring), witness={"error": f"{type(e).__name__}: {e}"})
        if not rep.ok:
            base.verdict = FAIL
            w = dict(rep.witness or {})
            w["trial"] = k
            w["trial_seed"] = ts
            w["check"] = rep.suite
            base.witness = w
            break
        passed += 1
        if suite == "endo" and not rep.details.get("image_variant_holds", True):
            image_variant_failures += 1
    base.details["passed"] = passed
    if suite == "endo":
        base.details["image_variant_failures"] = image_variant_failures
        from .gallery import endo_example
        neg = check_image_variant(endo_example(ring))
        base.details["image_counterexample"] = neg.verdict
        if neg.verdict != COUNTEREXAMPLE:
            base.verdict = FAIL
            base.witness = neg.witness
    return base


def fuzz(suite: str, trials: int, ring: Ring, max_dim: int, seed: int) -> CheckReport:
    if trials < 0 or max_dim < 0:
        raise InputError("fuzz: trials and max_dim must be nonnegative")
    if suite == "all":
        subs = [_fuzz_one(s, trials, ring, max_dim, seed) for s in SUITES]
        bad = [s for s in subs if s.verdict == FAIL]
        agg = CheckReport("all", FAIL if bad else PASS, str(ring), trials, seed,
                          details={"max_dim": max_dim,
                                   "suites": {s.suite: s.verdict for s in subs}})
        agg.subreports = subs
        return agg
    if suite not in SUITES:
        raise InputError(f"fuzz: unknown suite {suite!r} (choose from {', '.join(SUITES + ('all',))})")
    return _fuzz_one(suite, trials, ring, max_dim, seed)


__all__ = [
    "CheckReport", "check_support_theorem", "check_corollary", "check_endo_theorem",
    "check_image_variant", "check_eigenvalue_remark", "check_cc_properties", "fuzz", "run_trial",
]
