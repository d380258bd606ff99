import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uinorm import inequalities as iq
from uinorm.calculus import HerglotzMeasure
from uinorm.errors import DomainError, PreconditionError
from uinorm.norms import NormKind, norm, norm_suite
from uinorm.sampling import SamplerConfig, random_herglotz, stream

from conftest import haar

SQRT2 = math.sqrt(2)
OP = NormKind.operator()
HS = NormKind.schatten(2)
ZERO = np.zeros((3, 3))


def inputs(seed, n=3):
    r = np.random.default_rng(seed)
    x = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    return x, random_herglotz(rng=stream(seed, 1)), random_herglotz(rng=stream(seed, 2))


def normal(seed, n=3, radius=0.9):
    r = np.random.default_rng(seed)
    lam = radius * np.sqrt(r.uniform(0, 1, n)) * np.exp(2j * math.pi * r.uniform(0, 1, n))
    u = haar(r, n)
    return (u * lam) @ u.conj().T


def test_registry_ids():
    assert len(iq.STATEMENTS) == 24
    assert set(iq.LEMMA_IDS) == {
        "lemma-andozhan", "lemma-bouldin", "lemma-halfsum", "lemma-resolvent",
        "lemma-conjugation", "lemma-fugledeputnam", "lemma-s4",
    }
    with pytest.raises(DomainError):
        iq.get_statement("thm9")


@pytest.mark.parametrize("kind", norm_suite(3))
def test_thm1_zero_witness(kind):
    x, f, g = inputs(0)
    rep = iq.check_thm1("plus", ZERO, ZERO, x, f, g, kind)
    assert rep.lhs == pytest.approx(2 * norm(x, kind), rel=1e-13)
    assert rep.rhs == pytest.approx(2 * SQRT2 * norm(x, kind), rel=1e-13)
    assert rep.ratio == pytest.approx(1 / SQRT2, abs=1e-12)
    assert rep.passed and rep.d_a == 1.0 and rep.d_b == 1.0
    rep = iq.check_thm1("minus", ZERO, ZERO, x, f, g, kind)
    assert rep.lhs == 0.0 and rep.ratio == 0.0 and rep.passed


def test_thm1_rejects_bad_sign():
    x, f, g = inputs(0)
    with pytest.raises(DomainError):
        iq.check_thm1("times", ZERO, ZERO, x, f, g, OP)


def test_thm1_rejects_spectrum_outside_disk():
    x, f, g = inputs(0)
    with pytest.raises(DomainError):
        iq.check_thm1("plus", np.eye(3), ZERO, x, f, g, OP)


def test_remark1_examples():
    x, f, g = inputs(1)
    rep = iq.check_remark1(ZERO, ZERO, x, f, g, NormKind.ky_fan(2))
    assert rep.ratio == pytest.approx(1 / (2 * SQRT2), abs=1e-12)
    a, b = normal(1), normal(2)
    rep = iq.check_remark1(a, b, np.zeros((3, 3)), f, g, OP)
    assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.passed


def test_cor_c1_zero_witness_is_tight():
    r = np.random.default_rng(3)
    u = haar(r, 3)
    x = (u * (r.standard_normal(3) + 1j * r.standard_normal(3))) @ u.conj().T
    _, f, g = inputs(3)
    rep = iq.check_cor_c1("plus", ZERO, x, f, g, OP)
    assert rep.ratio == pytest.approx(1.0, abs=1e-12)
    assert rep.passed
    rep = iq.check_cor_c1("plus", ZERO, ZERO, f, g, OP)
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_cor_c1_preconditions():
    x, f, g = inputs(4)
    with pytest.raises(PreconditionError):
        iq.check_cor_c1("plus", normal(4), x, f, g, OP)


def test_cor_c2_scalar_oracle():
    f = HerglotzMeasure.point(0.0)
    a = 0.5
    rep = iq.check_cor_c2(np.diag([a]), np.eye(1), f, f, OP)
    fa = (1 + a) / (1 - a)
    assert rep.lhs == pytest.approx(abs(fa * fa - 1), rel=1e-14)
    assert rep.rhs == pytest.approx(2 * SQRT2 / (1 - a) ** 2 * 2 * a, rel=1e-14)
    assert rep.passed
    x, f, g = inputs(5)
    assert iq.check_cor_c2(ZERO, x, f, g, OP).lhs == 0.0


def test_prop_c4_examples():
    f = HerglotzMeasure.point(0.0)
    rep = iq.check_prop_c4(np.diag([0.5]), np.eye(1), f, f, OP)
    assert rep.lhs == pytest.approx(8.0, rel=1e-14)
    assert rep.rhs == pytest.approx(2 * SQRT2 / 0.25 * 1.0, rel=1e-14)
    assert rep.passed
    _, f, g = inputs(6)
    u = haar(np.random.default_rng(6), 3)
    assert iq.check_prop_c4(ZERO, u, f, g, OP).lhs == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        iq.check_prop_c4(-0.5 * np.eye(3), u, f, g, OP)


@pytest.mark.parametrize("kind", norm_suite(3))
def test_corollary_and_sum_zero_witnesses(kind):
    _, f, g = inputs(7)
    rep = iq.check_cor_c3("plus", ZERO, ZERO, f, g, kind)
    assert rep.lhs == pytest.approx(norm(2 * np.eye(3), kind), rel=1e-13)
    assert rep.ratio == pytest.approx(1 / SQRT2, abs=1e-12)
    assert iq.check_cor_c3("minus", ZERO, ZERO, f, g, kind).lhs == 0.0
    x, _, _ = inputs(7)
    rep = iq.check_thm_sum("plus", ZERO, ZERO, x, f, g, kind)
    assert rep.lhs == pytest.approx(2 * norm(x, kind), rel=1e-13)
    assert rep.rhs == pytest.approx(2 * SQRT2 * norm(x, kind), rel=1e-13)
    assert iq.check_thm_sum("minus", ZERO, ZERO, x, f, g, kind).lhs == 0.0


def test_prop_t2n_zero_witness():
    # with B = 0 the |XB| term vanishes: bound 1 is sqrt2 (1 + 1 + 1)|||X|||
    x, f, g = inputs(8)
    first, second = iq.check_prop_t2n(ZERO, ZERO, x, f, g, OP)
    nx = norm(x, OP)
    assert first.lhs == pytest.approx(3 * nx, rel=1e-13)
    assert first.rhs == pytest.approx(3 * SQRT2 * nx, rel=1e-13)
    assert second.rhs == pytest.approx(6 * nx, rel=1e-13)
    assert first.ratio == pytest.approx(1 / SQRT2, abs=1e-12)
    assert second.ratio == pytest.approx(0.5, abs=1e-12)
    z = iq.check_prop_t2n(normal(8), normal(9), np.zeros((3, 3)), f, g, OP)
    assert all(r.lhs == 0.0 and r.rhs == 0.0 and r.passed for r in z)


def test_thm_hs_zero_witness():
    x, f, g = inputs(9)
    first, second = iq.check_thm_hs("plus", ZERO, ZERO, x, f, g)
    assert first.norm == HS
    assert first.ratio == pytest.approx(1.0, abs=1e-12)
    assert first.passed
    assert second.ratio <= 1.0
    first, second = iq.check_thm_hs("minus", ZERO, ZERO, x, f, g)
    assert first.lhs == 0.0 and second.lhs == 0.0
    z = iq.check_thm_hs("plus", ZERO, ZERO, np.zeros((3, 3)), f, g)
    assert all(r.lhs == 0.0 and r.rhs == 0.0 for r in z)


def test_thm_hs_requires_hermitian():
    x, f, g = inputs(9)
    with pytest.raises(DomainError):
        iq.check_thm_hs("plus", normal(9), ZERO, x, f, g)


def test_lemma_examples():
    two = 2 * np.eye(2)
    sides = iq.andozhan_sides(np.eye(2), np.eye(2))
    (lhs, rhs), = sides.values([NormKind.ky_fan(2)])
    assert lhs == pytest.approx(2 * SQRT2, rel=1e-14) and rhs == pytest.approx(4, rel=1e-14)
    assert norm(two, OP) == 2
    c = np.array([[0.3 - 0.2j]])
    (lhs, rhs), = iq.halfsum_sides(c, c).values([OP])
    assert lhs == pytest.approx(rhs, rel=1e-15)
    assert iq.halfsum_pointwise(c, c) <= 1e-15


def test_resolvent_lemma_is_tight_for_normal():
    a = normal(10)
    (lhs, rhs), = iq.resolvent_sides(a).values([OP])
    assert lhs <= rhs * (1 + 1e-9)
    # the grid maximum approaches 1/d_A as the grid refines
    (fine, _), = iq.resolvent_sides(a, points=4096).values([OP])
    assert fine == pytest.approx(rhs, rel=1e-4)


def test_report_rhs_zero_rule():
    r = iq.make_report("x", 1, OP, 0.0, 0.0)
    assert r.ratio == 0.0 and r.passed
    r = iq.make_report("x", 1, OP, 1e-6, 0.0)
    assert r.ratio == math.inf and not r.passed


@given(st.integers(0, 10**6), st.floats(0.01, 100.0), st.sampled_from(["plus", "minus"]))
def test_scale_covariance(seed, c, sign):
    a, b = normal(seed), normal(seed + 1)
    x, f, g = inputs(seed)
    for check in (iq.check_thm1, iq.check_thm_sum):
        r1 = check(sign, a, b, x, f, g, NormKind.schatten(3))
        r2 = check(sign, a, b, c * x, f, g, NormKind.schatten(3))
        assert r2.lhs == pytest.approx(c * r1.lhs, rel=1e-9)
        assert r2.rhs == pytest.approx(c * r1.rhs, rel=1e-9)
        assert r2.ratio == pytest.approx(r1.ratio, rel=1e-9, abs=1e-12)


@given(st.integers(0, 10**6), st.sampled_from(["plus", "minus"]))
def test_unitary_covariance(seed, sign):
    r = np.random.default_rng(seed)
    a, b = normal(seed), normal(seed + 1)
    x, f, g = inputs(seed)
    w, v = haar(r, 3), haar(r, 3)
    kind = NormKind.ky_fan(2)
    r1 = iq.check_thm1(sign, a, b, x, f, g, kind)
    r2 = iq.check_thm1(sign, w @ a @ w.conj().T, v @ b @ v.conj().T, w @ x @ v.conj().T, f, g, kind)
    for name in ("lhs", "rhs", "d_a", "d_b"):
        assert getattr(r2, name) == pytest.approx(getattr(r1, name), rel=1e-9)


@pytest.mark.parametrize("theorem_id", sorted(iq.STATEMENTS))
@pytest.mark.parametrize("dim", [1, 3, 5])
def test_seeded_batches_pass(theorem_id, dim):
    cfg = SamplerConfig(2024, dim)
    for t in range(15):
        for rep in iq.run_trial(theorem_id, cfg, t):
            assert rep.passed, rep


@pytest.mark.parametrize("theorem_id", ["thm1-plus", "thm1-minus", "thm-sum-plus", "cor-c2", "remark1"])
def test_kyfan_completeness(theorem_id):
    # passing every Ky Fan norm must be matched by the operator and Schatten checks
    cfg = SamplerConfig(77, 4)
    for t in range(10):
        reps = iq.run_trial(theorem_id, cfg, t)
        kyfan = [r for r in reps if r.norm.variant == "kyfan"]
        others = [r for r in reps if r.norm.variant != "kyfan"]
        assert all(r.passed for r in kyfan)
        assert all(r.passed for r in others)


def test_lemma_suite_covers_every_lemma():
    reps = iq.check_lemma_suite(SamplerConfig(1, 3))
    assert {r.theorem_id for r in reps} == set(iq.LEMMA_IDS)
    assert all(r.passed for r in reps)


def test_bouldin_needs_normal_inputs():
    with pytest.raises(DomainError):
        iq.bouldin_sides(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2))


def test_fuglede_putnam_residual():
    cfg = SamplerConfig(5, 6)
    for t in range(20):
        (rep,) = iq.run_trial("lemma-fugledeputnam", cfg, t, [OP])
        assert rep.lhs <= 1e-10
