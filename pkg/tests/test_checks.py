"""Theorem checks on known inputs, and the seeded fuzz driver."""

import pytest
from hypothesis import given, settings

from pervcalc import checks
from pervcalc.checks import (
    COUNTEREXAMPLE,
    FAIL,
    MODES,
    PASS,
    UNSUPPORTED,
    CheckReport,
    check_cc_properties,
    check_corollary,
    check_endo_theorem,
    check_eigenvalue_remark,
    check_image_variant,
    check_support_theorem,
    fuzz,
    run_trial,
)
from pervcalc.errors import InputError, UnsupportedRingError
from pervcalc.gallery import endo_example, rx_shift, s_inclusion, t_resolution
from pervcalc.linalg import QQ, ZZ, Ring
from pervcalc.perv import PervMorphism, perv_factorization

from strategies import F5, fields, perv_endomorphisms, perv_morphisms

F3 = Ring.fp(3)


# -- checks on fixed inputs --------------------------------------------------------


@pytest.mark.parametrize("ring", (ZZ, QQ, F5), ids=str)
@pytest.mark.parametrize("mode", MODES)
def test_support_theorem_on_gallery(ring, mode):
    for T in (t_resolution(ring), s_inclusion(ring), endo_example(ring)):
        assert check_support_theorem(T, mode).verdict == PASS


def test_support_theorem_reports_support():
    rep = check_support_theorem(t_resolution(ZZ), "ker")
    assert rep.details["support"] == "{origin}"
    with pytest.raises(InputError):
        check_support_theorem(t_resolution(ZZ), "kernel")


def test_corollary_on_gallery():
    rep = check_corollary(t_resolution(ZZ))
    assert rep.verdict == PASS
    assert rep.details == {"injective": False, "surjective": True, "zero": False}
    assert check_corollary(s_inclusion(ZZ)).details["injective"] is True


def test_endo_theorem_on_example():
    rep = check_endo_theorem(endo_example(QQ))
    assert rep.verdict == PASS
    assert rep.details["cc_kernel"] == "(1, 1; 1)"
    assert rep.details["image_variant_holds"] is False


def test_endo_checks_need_field_and_endomorphism():
    with pytest.raises(UnsupportedRingError):
        check_endo_theorem(endo_example(ZZ))
    with pytest.raises(UnsupportedRingError):
        check_image_variant(endo_example(ZZ))
    with pytest.raises(InputError, match="not an endomorphism"):
        check_endo_theorem(t_resolution(QQ))


def test_image_variant_holds_is_a_failure():
    # on the identity the image statement is true, so this is not a counterexample
    rep = check_image_variant(PervMorphism.identity(rx_shift(QQ)))
    assert rep.verdict == FAIL
    assert rep.witness["reason"]


def test_image_variant_counterexample():
    rep = check_image_variant(endo_example(QQ))
    assert rep.verdict == COUNTEREXAMPLE
    assert rep.ok
    assert rep.details["support_image"] == "{origin}"


def test_eigen_on_scalars():
    P = rx_shift(QQ)
    rep = check_eigenvalue_remark(PervMorphism.scalar(P, 2))
    assert rep.verdict == PASS
    assert rep.details["eigenvalues"] == ["2"]
    rep = check_eigenvalue_remark(endo_example(F3))
    assert rep.details["lambdas_tested"] == 3
    assert rep.details["eigenvalues"] == ["0"]


def test_cc_properties_on_example():
    F = perv_factorization(endo_example(QQ))
    rep = check_cc_properties(F)
    assert rep.verdict == PASS
    assert rep.details["cc_kernel"] == rep.details["cc_cokernel"] == "(1, 1; 1)"
    assert check_cc_properties(rx_shift(QQ)).verdict == PASS
    with pytest.raises(InputError):
        check_cc_properties(3)


# -- the statements as properties ------------------------------------------------------


@settings(max_examples=40)
@given(perv_morphisms())
def test_support_theorem_property(T):
    for mode in MODES:
        assert check_support_theorem(T, mode).verdict == PASS


@settings(max_examples=40)
@given(perv_morphisms())
def test_corollary_property(T):
    assert check_corollary(T).verdict == PASS


@settings(max_examples=40)
@given(perv_endomorphisms(fields))
def test_endo_and_eigen_property(T):
    assert check_endo_theorem(T).verdict == PASS
    assert check_eigenvalue_remark(T).verdict == PASS


@settings(max_examples=40)
@given(perv_morphisms(fields))
def test_cc_property(T):
    assert check_cc_properties(perv_factorization(T)).verdict == PASS


# -- fuzz driver --------------------------------------------------------------------------


def test_fuzz_is_deterministic():
    a = fuzz("support", 20, ZZ, 4, 99)
    b = fuzz("support", 20, ZZ, 4, 99)
    assert a.to_json() == b.to_json()
    assert a.verdict == PASS and a.details["passed"] == 20


def test_fuzz_unsupported_over_z():
    for suite in ("endo", "eigen", "cc"):
        rep = fuzz(suite, 5, ZZ, 4, 0)
        assert rep.verdict == UNSUPPORTED
        assert "requires a field" in rep.details["reason"]


def test_fuzz_all_and_errors():
    rep = fuzz("all", 5, QQ, 3, 1)
    assert rep.verdict == PASS
    assert set(rep.details["suites"]) == set(checks.SUITES)
    assert len(rep.subreports) == len(checks.SUITES)
    with pytest.raises(InputError):
        fuzz("nope", 1, QQ, 3, 0)
    with pytest.raises(InputError):
        fuzz("support", -1, QQ, 3, 0)


def test_endo_fuzz_confirms_counterexample():
    rep = fuzz("endo", 10, QQ, 3, 0)
    assert rep.details["image_counterexample"] == COUNTEREXAMPLE


def test_failure_yields_replayable_witness(monkeypatch):
    real = checks.check_support_theorem

    def planted(T, mode):
        # a deliberately wrong "theorem": kernels never live on branch 1
        if mode == "ker" and not T.a[0].kernel().is_zero():
            return CheckReport("support[ker]", FAIL, str(T.ring), witness={"planted": "yes"})
        return real(T, mode)

    monkeypatch.setattr(checks, "check_support_theorem", planted)
    rep = fuzz("support", 200, QQ, 4, 5)
    assert rep.verdict == FAIL
    w = rep.witness
    assert w["planted"] == "yes"
    assert w["check"] == "support[ker]"
    assert rep.details["passed"] == w["trial"]
    replay = run_trial("support", QQ, 4, w["trial_seed"])
    assert replay.verdict == FAIL
    assert replay.witness["planted"] == "yes"
    assert any("witness" in line for line in rep.summary_lines())


def test_trial_errors_become_failures(monkeypatch):
    def boom(*args):
        raise ArithmeticError("planted")

    monkeypatch.setattr(checks, "run_trial", boom)
    rep = fuzz("cc", 3, QQ, 3, 0)
    assert rep.verdict == FAIL
    assert "planted" in rep.witness["error"]
    assert rep.witness["trial"] == 0
