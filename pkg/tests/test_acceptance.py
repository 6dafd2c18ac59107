"""Acceptance criteria, one test per criterion.

The summary at the end of the pytest run prints one PASS/FAIL line for each
criterion (see conftest.py).
"""

import io as _io
import time

import pytest

from pervcalc import cli, io
from pervcalc.checks import COUNTEREXAMPLE, PASS, check_image_variant, fuzz
from pervcalc.functors import Location, induced_stalk_maps, locations, nearby_and_vanishing, stalk_cohomology, support
from pervcalc.gallery import endo_example, gallery, ic_x, m_shift, rx_shift, s_inclusion, t_resolution
from pervcalc.linalg import QQ, ZZ, FGModule, Matrix, ModuleMap, Ring, determinant, exactness_check, module_leq
from pervcalc.linalg.modules import direct_sum_module
from pervcalc.linalg.snf import smith_form
from pervcalc.perv import direct_sum, find_isomorphism, morphism_classify, perv_factorization
from pervcalc.generators import random_module
from pervcalc.rng import SplitMix64

Z1 = FGModule(ZZ, 1)
Z2 = FGModule(ZZ, 2)
Z0 = FGModule(ZZ, 0)


def _all_stalk_maps_zero(T):
    return all(m.is_zero() for loc in locations(T.branches)
               for m in induced_stalk_maps(T, loc).maps.values())


def _cli(argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = cli.run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.criterion(1, "resolution map R_X[1] -> I_X over Z")
def test_criterion_1_resolution_over_z():
    start = time.perf_counter()
    T = t_resolution(ZZ)
    F = perv_factorization(T)
    K = F.kernel
    assert all(M.is_zero() for M in K.psi)
    assert K.phi == Z1
    assert K == m_shift(ZZ)
    assert find_isomorphism(K, m_shift(ZZ)).verdict == "isomorphic"

    P, Q = T.source, T.target
    o, b = Location.origin(), Location(1)
    assert stalk_cohomology(P, o).groups == {-1: Z1, 0: Z0}
    assert stalk_cohomology(P, b).groups == {-1: Z1, 0: Z0}
    assert stalk_cohomology(Q, o).groups == {-1: Z2, 0: Z0}

    assert morphism_classify(T).surjective
    S = s_inclusion(ZZ)
    assert morphism_classify(S).injective
    assert _all_stalk_maps_zero(S)
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "vanishing-cycle values and exact Phi-sequence over Z")
def test_criterion_2_vanishing_cycles_over_z():
    start = time.perf_counter()
    assert nearby_and_vanishing(rx_shift(ZZ)).phi == Z1
    assert nearby_and_vanishing(ic_x(ZZ)).phi == Z0
    T = t_resolution(ZZ)
    F = perv_factorization(T)
    assert F.kernel.phi == Z1

    # 0 -> Phi(ker T) -> Phi(R_X[1]) -> Phi(I_X) -> Phi(coker T) -> 0
    seq = [ModuleMap.zero(Z0, F.kernel.phi), F.iota.b, T.b, F.pi.b,
           ModuleMap.zero(F.cokernel.phi, Z0)]
    assert exactness_check(seq) == [True] * 4
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(3, "endomorphism example over Q: ker, im, coker, CC")
def test_criterion_3_endo_example_over_q():
    from pervcalc.functors import characteristic_cycle

    start = time.perf_counter()
    T = endo_example(QQ)
    F = perv_factorization(T)
    assert find_isomorphism(F.image, m_shift(QQ)).verdict == "isomorphic"
    assert _all_stalk_maps_zero(T)
    assert find_isomorphism(F.kernel, rx_shift(QQ)).verdict == "isomorphic"
    assert find_isomorphism(F.cokernel, direct_sum(m_shift(QQ), ic_x(QQ))).verdict == "isomorphic"

    res = find_isomorphism(F.kernel, F.cokernel)
    assert res.verdict == "distinguished"
    o = Location.origin()
    assert stalk_cohomology(F.kernel, o).groups != stalk_cohomology(F.cokernel, o).groups

    cc_k, cc_c = characteristic_cycle(F.kernel), characteristic_cycle(F.cokernel)
    assert cc_k == cc_c
    assert (cc_k.m_branch, cc_k.m_origin) == ((1, 1), 1)
    assert time.perf_counter() - start < 1.0


FUZZ_PLAN = [
    ("support", "q"), ("support", "fp:5"), ("support", "z"),
    ("endo", "q"), ("endo", "fp:5"),
    ("eigen", "q"), ("eigen", "fp:5"),
    ("cc", "q"),
]


@pytest.mark.criterion(4, "theorem fuzz suites, 1000 trials each, total < 60 s")
def test_criterion_4_fuzz_suites():
    total = 0.0
    for suite, ring in FUZZ_PLAN:
        t0 = time.perf_counter()
        rep = fuzz(suite, 1000, Ring.parse(ring), 6, 0)
        dt = time.perf_counter() - t0
        total += dt
        print(f"  {suite:8s} {ring:5s} {rep.verdict} {rep.details.get('passed')} trials {dt:6.2f} s")
        assert rep.verdict == PASS, rep.summary_lines()
        assert rep.details["passed"] == 1000
    print(f"  total {total:.2f} s")
    assert total < 60.0


@pytest.mark.criterion(5, "image variant on the endomorphism example is a confirmed counterexample")
def test_criterion_5_image_variant_counterexample():
    for ring in (QQ, Ring.fp(5)):
        T = endo_example(ring)
        rep = check_image_variant(T)
        assert rep.verdict == COUNTEREXAMPLE
        assert support(perv_factorization(T).image) == support(m_shift(ring))
        assert str(support(perv_factorization(T).image)) == "{origin}"
        assert rep.details["all_stalk_images_zero"] is True
    code, out, _ = _cli(["check", "--suite", "image-variant"])
    assert code == 0 and COUNTEREXAMPLE in out


def _random_int_matrix(rng, max_n=8, bound=9):
    m, n = rng.randint(1, max_n), rng.randint(1, max_n)
    return Matrix(ZZ, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(m)])


def _random_z_module(rng, max_gens=5):
    return random_module(ZZ, max_gens, rng)


def _exercise_linalg(seed, n_snf, n_mod):
    """Run the SNF and ordering workload; returns a digest of what was computed."""
    rng = SplitMix64(seed)
    digest = []
    for _ in range(n_snf):
        A = _random_int_matrix(rng)
        sf = smith_form(A)
        assert sf.U @ A @ sf.V == sf.D
        assert determinant(sf.U) in (1, -1)
        assert determinant(sf.V) in (1, -1)
        d = sf.diag
        assert all(x > 0 for x in d)
        assert all(b % a == 0 for a, b in zip(d, d[1:]))
        digest.append(tuple(d))
    for _ in range(n_mod):
        M, N, P = (_random_z_module(rng) for _ in range(3))
        assert module_leq(M, M)
        MP = direct_sum_module(M, P)
        assert module_leq(M, MP) and module_leq(P, MP)
        if module_leq(M, N) and module_leq(N, M):
            assert M == N
        NP = direct_sum_module(N, P)
        if module_leq(M, N):
            assert module_leq(M, NP)
        # cancellation: M + P == M forces P == 0
        assert (MP == M) == P.is_zero()
        assert module_leq(direct_sum_module(M, N), direct_sum_module(MP, N))
        digest.append((str(M), str(P), module_leq(M, N)))
    return digest


@pytest.mark.criterion(6, "SNF on 10000 matrices and module ordering on 10000 modules, < 30 s")
def test_criterion_6_linalg_properties():
    t0 = time.perf_counter()
    _exercise_linalg(6, 10_000, 10_000)
    elapsed = time.perf_counter() - t0
    print(f"  linalg workload {elapsed:.2f} s")
    assert elapsed < 30.0


def _write(tmp_path, name, value):
    path = tmp_path / name
    path.write_text(io.dumps(value))
    return str(path)


@pytest.mark.criterion(7, "same command and seed give byte-identical reports")
def test_criterion_7_determinism(tmp_path):
    t_res = _write(tmp_path, "t.json", t_resolution(ZZ))
    rx = _write(tmp_path, "rx.json", rx_shift(ZZ))
    ic = _write(tmp_path, "ic.json", ic_x(ZZ))
    endo = _write(tmp_path, "endo.json", endo_example(QQ))
    commands = [
        ["factor", "--in", t_res, "--seed", "7"],
        ["stalk", "--in", t_res, "--at", "origin", "--json"],
        ["phi", "--in", rx], ["phi", "--in", ic], ["phi", "--in", t_res, "--json"],
        ["factor", "--in", endo, "--json", "--seed", "3"],
        ["cc", "--in", endo],
        ["iso", "--source", rx, "--target", rx, "--seed", "5"],
        ["check", "--suite", "image-variant", "--json"],
    ]
    # fuzz commands use reduced trial counts; the 1000-trial runs are criterion 4
    for suite, ring in FUZZ_PLAN:
        commands.append(["check", "--suite", suite, "--ring", ring, "--trials", "25",
                         "--seed", "11", "--json"])
    for argv in commands:
        first = _cli(argv)
        second = _cli(argv)
        assert first == second, argv
        assert first[0] == 0, (argv, first[2])
    assert _exercise_linalg(3, 200, 200) == _exercise_linalg(3, 200, 200)
    assert gallery("endo_example", QQ).expected == gallery("endo_example", QQ).expected
