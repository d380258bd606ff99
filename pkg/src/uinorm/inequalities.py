"""Checkers for the norm inequalities and the lemmas their proofs rely on.

Every inequality has the shape ``|||L||| <= c * sum_i |||R_i||| + const``.
A checker builds the matrices ``L`` and ``R_i`` together with ``c`` (a
:class:`Sides` value); evaluating it under a norm yields a
:class:`TrialReport`.  Singular values are computed once per matrix and
reused for every norm in a suite.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import sampling as smp
from .calculus import apply_spectral, resolvent, spectral_gap
from .errors import DomainError, PreconditionError
from .linalg import (
    ABS_SLACK,
    absolute_value,
    direct_sum,
    eig_normal,
    identity,
    op_norm,
    psd_sqrt,
    singular_values,
    within_slack,
)
from .norms import NormKind, norm_suite

SQRT2 = math.sqrt(2.0)
NAN = float("nan")
COMMUTE_TOL = 1e-10
IDENTITY_TOL = 1e-9
CONJUGATION_TOL = 1e-9
FUGLEDE_TOL = 1e-10
HERMITIAN_TOL = 1e-12
RESOLVENT_POINTS = 64


@dataclass(frozen=True)
class TrialReport:
    theorem_id: str
    dim: int
    norm: NormKind
    lhs: float
    rhs: float
    ratio: float
    d_a: float
    d_b: float
    seed: int
    trial_index: int
    passed: bool


def make_report(theorem_id, dim, kind, lhs, rhs, d_a=NAN, d_b=NAN, seed=0, trial_index=0):
    if rhs == 0.0:
        ratio = 0.0 if lhs <= ABS_SLACK else math.inf
    else:
        ratio = lhs / rhs
    return TrialReport(
        theorem_id, dim, kind, float(lhs), float(rhs), float(ratio),
        float(d_a), float(d_b), seed, trial_index, bool(within_slack(lhs, rhs)),
    )


@dataclass(frozen=True)
class Sides:
    lhs: np.ndarray
    rhs_terms: tuple
    scale: float
    d_a: float = NAN
    d_b: float = NAN
    rhs_const: float = 0.0

    def values(self, kinds):
        """``(lhs, rhs)`` pairs, one per norm kind."""
        s_lhs = singular_values(self.lhs)
        s_rhs = [singular_values(t) for t in self.rhs_terms]
        out = []
        for kind in kinds:
            terms = math.fsum(kind.from_singular_values(s) for s in s_rhs)
            out.append((kind.from_singular_values(s_lhs), self.scale * terms + self.rhs_const))
        return out

    def reports(self, theorem_id, dim, kinds, seed=0, trial_index=0):
        return [
            make_report(theorem_id, dim, kind, lhs, rhs, self.d_a, self.d_b, seed, trial_index)
            for kind, (lhs, rhs) in zip(kinds, self.values(kinds))
        ]


def _sign(sign):
    if sign not in ("plus", "minus"):
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")
    return sign == "plus"


def _disk(a):
    dec = eig_normal(a)
    return dec, spectral_gap(dec.eigenvalues)


def _hermitian(a, what="A"):
    if op_norm(a - a.conj().T) > HERMITIAN_TOL * max(1.0, op_norm(a)):
        raise DomainError(f"{what} is not Hermitian")


def _normal(x, what="X"):
    xh = x.conj().T
    scale = op_norm(x)
    if op_norm(xh @ x - x @ xh) > 1e-9 * max(1.0, scale * scale):
        raise PreconditionError(f"{what} is not normal")


def _abs(a):
    return absolute_value(a)


# -- products f(A) X g(B) ------------------------------------------------------


def thm1_sides(sign, a, b, x, f, g):
    plus = _sign(sign)
    dec_a, d_a = _disk(a)
    dec_b, d_b = _disk(b)
    core = apply_spectral(f, dec_a) @ x @ apply_spectral(g, dec_b)
    if plus:
        lhs = core + x
        rhs = _abs(a @ x @ b) + _abs(x)
    else:
        lhs = core - x
        rhs = _abs(a @ x) + _abs(x @ b)
    return Sides(lhs, (rhs,), 2.0 * SQRT2 / (d_a * d_b), d_a, d_b)


def remark1_sides(a, b, x, f, g):
    dec_a, d_a = _disk(a)
    dec_b, d_b = _disk(b)
    n = a.shape[0]
    lhs = direct_sum(apply_spectral(f, dec_a) @ x @ apply_spectral(g, dec_b) + x, np.zeros((n, n)))
    return Sides(lhs, (direct_sum(a @ x @ b, x),), 4.0 * SQRT2 / (d_a * d_b), d_a, d_b)


def cor_c1_sides(sign, a, x, f, g):
    plus = _sign(sign)
    scale = max(1.0, op_norm(a) * op_norm(x))
    if op_norm(a @ x - x @ a) > COMMUTE_TOL * scale:
        raise PreconditionError("X does not commute with A")
    _normal(x)
    dec, d_a = _disk(a)
    ah = a.conj().T
    abs_x = _abs(x)
    residual = op_norm(_abs(a @ x @ ah) - a @ abs_x @ ah)
    if residual > IDENTITY_TOL * max(1.0, op_norm(a) ** 2 * op_norm(x)):
        raise PreconditionError(f"|AXA*| differs from A|X|A* by {residual:.3e}")
    core = apply_spectral(f, dec) @ x @ apply_spectral(g, dec.adjoint())
    if plus:
        lhs = core + x
        rhs = a @ abs_x @ ah + abs_x
    else:
        lhs = core - x
        rhs = _abs(a @ x) + _abs(x @ ah)
    return Sides(lhs, (rhs,), 2.0 / d_a**2, d_a, d_a)


def cor_c2_sides(a, x, f, g):
    dec, d_a = _disk(a)
    lhs = apply_spectral(f, dec) @ x @ apply_spectral(g, dec) - x
    return Sides(lhs, (_abs(a @ x) + _abs(x @ a),), 2.0 * SQRT2 / d_a**2, d_a, d_a)


def cor_c3_sides(sign, a, b, f, g):
    return thm1_sides(sign, a, b, identity(a.shape[0]), f, g)


def prop_c4_sides(a, u, f, g):
    _hermitian(a)
    n = a.shape[0]
    if op_norm(u.conj().T @ u - identity(n)) > 1e-10:
        raise PreconditionError("U is not unitary")
    dec, d_a = _disk(a)
    lam = dec.eigenvalues.real
    if np.any(lam < -HERMITIAN_TOL) or np.any(lam >= 1.0):
        raise DomainError("A must be positive with spectrum in [0, 1)")
    lhs = apply_spectral(f, dec) @ u @ apply_spectral(g, dec) - u
    return Sides(lhs, (a @ u + u @ a,), 2.0 * SQRT2 / d_a**2, d_a, d_a)


# -- sums f(A) X + X g(B) ----------------------------------------------------


def thm_sum_sides(sign, a, b, x, f, g):
    plus = _sign(sign)
    dec_a, d_a = _disk(a)
    dec_b, d_b = _disk(b)
    fax = apply_spectral(f, dec_a) @ x
    xgb = x @ apply_spectral(g, dec_b)
    if plus:
        lhs = fax + xgb
        rhs = _abs(a @ x @ b) + _abs(x)
    else:
        lhs = fax - xgb
        rhs = _abs(a @ x) + _abs(x @ b)
    return Sides(lhs, (rhs,), 2.0 * SQRT2 / (d_a * d_b), d_a, d_b)


def prop_t2n_sides(a, b, x, f, g):
    """Both bounds on ``f(A)X + f(A)Xg(B) + Xg(B)``."""
    dec_a, d_a = _disk(a)
    dec_b, d_b = _disk(b)
    fa = apply_spectral(f, dec_a)
    gb = apply_spectral(g, dec_b)
    lhs = fa @ x + fa @ x @ gb + x @ gb
    axb, ax, xb, ox = _abs(a @ x @ b), _abs(a @ x), _abs(x @ b), _abs(x)
    dd = d_a * d_b
    first = Sides(lhs, (axb + ox, xb + ox, ax + ox), SQRT2 / dd, d_a, d_b)
    second = Sides(lhs, (axb + ax + xb + 3.0 * ox,), 2.0 / dd, d_a, d_b)
    return first, second


def thm_hs_sides(sign, a, b, x, f, g):
    """Both Hilbert-Schmidt bounds for Hermitian ``A``, ``B``."""
    plus = _sign(sign)
    _hermitian(a, "A")
    _hermitian(b, "B")
    dec_a, d_a = _disk(a)
    dec_b, d_b = _disk(b)
    fa = apply_spectral(f, dec_a)
    gb = apply_spectral(g, dec_b)
    abs_a = _abs(a)
    abs_b = _abs(b)
    n = a.shape[0]
    lhs1 = fa @ x + x @ gb if plus else fa @ x - x @ gb
    rhs1 = (x + abs_a @ x) / d_a + (x + x @ abs_b) / d_b
    lhs2 = fa @ x @ gb + x if plus else fa @ x @ gb - x
    eye = identity(n)
    rhs2 = ((eye + abs_a) / d_a) @ x @ ((eye + abs_b) / d_b) + x
    return Sides(lhs1, (rhs1,), 1.0, d_a, d_b), Sides(lhs2, (rhs2,), 1.0, d_a, d_b)


# -- proof ingredients ----------------------------------------------------------


def andozhan_sides(c, d):
    """Operator-monotone square root: ``|||sqrt(C + D)||| <= |||sqrt C + sqrt D|||``."""
    for m, what in ((c, "C"), (d, "D")):
        _hermitian(m, what)
    return Sides(psd_sqrt(c + d), (psd_sqrt(c) + psd_sqrt(d),), 1.0)


def bouldin_sides(c, d):
    """``|||C + D||| <= ||| |C| + |D| |||`` for normal ``C``, ``D``."""
    _normal(c, "C")
    _normal(d, "D")
    return Sides(c + d, (_abs(c) + _abs(d),), 1.0)


def halfsum_sides(c, d):
    """``s_j((C + D)/2) <= s_j(C + D direct sum)``, read through a norm."""
    n = c.shape[0]
    return Sides(direct_sum(0.5 * (c + d), np.zeros((n, n))), (direct_sum(c, d),), 1.0)


def halfsum_pointwise(c, d):
    """Largest violation of ``s_j((C+D)/2) <= s_j(C (+) D)`` over j."""
    n = c.shape[0]
    lhs = singular_values(0.5 * (c + d))
    rhs = singular_values(direct_sum(c, d))[:n]
    return float(np.max(lhs - rhs))


def resolvent_sides(a, offset=0.0, points=RESOLVENT_POINTS):
    """Resolvent on the unit circle is bounded by ``1/d_A``.

    The largest resolvent over ``points`` circle points is kept.
    """
    dec, d_a = _disk(a)
    scale = op_norm(a) + 1.0
    best, best_norm = None, -1.0
    for k in range(points):
        z = np.exp(1j * (offset + 2.0 * math.pi * k / points))
        r = resolvent(a, z, scale=scale)
        nr = op_norm(r)
        if nr > best_norm:
            best, best_norm = r, nr
    return Sides(best, (), 1.0, d_a, d_a, rhs_const=1.0 / d_a)


def conjugation_sides(a, u, f):
    """``f(UAU*) = U f(A) U*`` for Hermitian ``A``."""
    _hermitian(a)
    dec, d_a = _disk(a)
    fa = apply_spectral(f, dec)
    uau = u @ a @ u.conj().T
    uau = 0.5 * (uau + uau.conj().T)
    lhs = apply_spectral(f, eig_normal(uau)) - u @ fa @ u.conj().T
    return Sides(lhs, (fa,), CONJUGATION_TOL, d_a, d_a)


def fugledeputnam_sides(a, x):
    """``AX = XA`` with ``X`` normal forces ``AX* = X*A``."""
    scale = max(1.0, op_norm(a) * op_norm(x))
    if op_norm(a @ x - x @ a) > COMMUTE_TOL * scale:
        raise PreconditionError("X does not commute with A")
    _normal(x)
    _, d_a = _disk(a)
    xh = x.conj().T
    return Sides(a @ xh - xh @ a, (x,), FUGLEDE_TOL * op_norm(a), d_a, d_a)


def s4_sides(a, b, x, alpha, beta):
    """``|||AXB + e^{ia} X e^{ib}||| <= sqrt2 ||| |AXB| + |X| |||``."""
    axb = a @ x @ b
    lhs = axb + np.exp(1j * (alpha + beta)) * x
    return Sides(lhs, (_abs(axb) + _abs(x),), SQRT2)


# -- public single-norm checkers ------------------------------------------------


def _one(theorem_id, sides, dim, kind, seed, trial_index):
    return sides.reports(theorem_id, dim, [kind], seed, trial_index)[0]


def check_thm1(sign, a, b, x, f, g, kind, seed=0, trial_index=0):
    return _one(f"thm1-{sign}", thm1_sides(sign, a, b, x, f, g), a.shape[0], kind, seed, trial_index)


def check_remark1(a, b, x, f, g, kind, seed=0, trial_index=0):
    return _one("remark1", remark1_sides(a, b, x, f, g), a.shape[0], kind, seed, trial_index)


def check_cor_c1(sign, a, x, f, g, kind, seed=0, trial_index=0):
    return _one(f"cor-c1-{sign}", cor_c1_sides(sign, a, x, f, g), a.shape[0], kind, seed, trial_index)


def check_cor_c2(a, x, f, g, kind, seed=0, trial_index=0):
    return _one("cor-c2", cor_c2_sides(a, x, f, g), a.shape[0], kind, seed, trial_index)


def check_cor_c3(sign, a, b, f, g, kind, seed=0, trial_index=0):
    return _one(f"cor-c3-{sign}", cor_c3_sides(sign, a, b, f, g), a.shape[0], kind, seed, trial_index)


def check_prop_c4(a, u, f, g, kind, seed=0, trial_index=0):
    return _one("prop-c4", prop_c4_sides(a, u, f, g), a.shape[0], kind, seed, trial_index)


def check_thm_sum(sign, a, b, x, f, g, kind, seed=0, trial_index=0):
    return _one(f"thm-sum-{sign}", thm_sum_sides(sign, a, b, x, f, g), a.shape[0], kind, seed, trial_index)


def check_prop_t2n(a, b, x, f, g, kind, seed=0, trial_index=0):
    first, second = prop_t2n_sides(a, b, x, f, g)
    n = a.shape[0]
    return (
        _one("prop-t2n-bound1", first, n, kind, seed, trial_index),
        _one("prop-t2n-bound2", second, n, kind, seed, trial_index),
    )


def check_thm_hs(sign, a, b, x, f, g, seed=0, trial_index=0):
    first, second = thm_hs_sides(sign, a, b, x, f, g)
    n = a.shape[0]
    kind = NormKind.schatten(2)
    return (
        _one(f"thm-hs-{sign}-first", first, n, kind, seed, trial_index),
        _one(f"thm-hs-{sign}-second", second, n, kind, seed, trial_index),
    )


# -- registry -----------------------------------------------------------------------


@dataclass(frozen=True)
class Statement:
    """A registered inequality: how to sample its inputs and build its sides.

    ``sample`` returns a dict of parameter objects (see :mod:`uinorm.sampling`);
    ``build`` receives their realized values as keyword arguments.
    """

    theorem_id: str
    sample: Callable
    build: Callable
    fixed_norm: Optional[NormKind] = None
    doubled: bool = False

    def kinds(self, n):
        if self.fixed_norm is not None:
            return [self.fixed_norm]
        return norm_suite(2 * n if self.doubled else n)

    def sides(self, params):
        return self.build(**realize(params))

    def reports(self, params, dim, kinds, seed=0, trial_index=0):
        return self.sides(params).reports(self.theorem_id, dim, kinds, seed, trial_index)


def realize(params):
    out = {}
    for name, p in params.items():
        if isinstance(p, smp.CommutingPairParam):
            out["a"], out["x"] = p.matrices()
        elif isinstance(p, smp.MeasureParam):
            out[name] = p.measure
        elif isinstance(p, smp.AngleParam):
            out[name] = p.value
        else:
            out[name] = p.matrix()
    return out


def _pair_general(cfg, rng):
    return {
        "a": smp.sample_normal(cfg, rng),
        "b": smp.sample_normal(cfg, rng),
        "x": smp.sample_general(cfg, rng),
        "f": smp.sample_measure(rng),
        "g": smp.sample_measure(rng),
    }


def _commuting(cfg, rng):
    return {"pair": smp.sample_commuting(cfg, rng), "f": smp.sample_measure(rng), "g": smp.sample_measure(rng)}


def _single_general(cfg, rng):
    return {
        "a": smp.sample_normal(cfg, rng),
        "x": smp.sample_general(cfg, rng),
        "f": smp.sample_measure(rng),
        "g": smp.sample_measure(rng),
    }


def _pair_only(cfg, rng):
    return {
        "a": smp.sample_normal(cfg, rng),
        "b": smp.sample_normal(cfg, rng),
        "f": smp.sample_measure(rng),
        "g": smp.sample_measure(rng),
    }


def _positive_unitary(cfg, rng):
    return {
        "a": smp.sample_hermitian(cfg, rng, 0.0, 0.999),
        "u": smp.UnitaryParam(smp.random_unitary(cfg, rng)),
        "f": smp.sample_measure(rng),
        "g": smp.sample_measure(rng),
    }


def _hermitian_pair(cfg, rng):
    return {
        "a": smp.sample_hermitian(cfg, rng),
        "b": smp.sample_hermitian(cfg, rng),
        "x": smp.sample_general(cfg, rng),
        "f": smp.sample_measure(rng),
        "g": smp.sample_measure(rng),
    }


def _psd_pair(cfg, rng):
    return {"c": smp.sample_hermitian(cfg, rng, 0.0, 0.999), "d": smp.sample_hermitian(cfg, rng, 0.0, 0.999)}


def _normal_pair(cfg, rng):
    return {"c": smp.sample_normal(cfg, rng), "d": smp.sample_normal(cfg, rng)}


def _general_pair(cfg, rng):
    return {"c": smp.sample_general(cfg, rng), "d": smp.sample_general(cfg, rng)}


def _resolvent_input(cfg, rng):
    return {"a": smp.sample_normal(cfg, rng), "offset": smp.AngleParam(float(rng.uniform(0.0, 2.0 * math.pi)))}


def _conjugation_input(cfg, rng):
    return {
        "a": smp.sample_hermitian(cfg, rng),
        "u": smp.UnitaryParam(smp.random_unitary(cfg, rng)),
        "f": smp.sample_measure(rng),
    }


def _fuglede_input(cfg, rng):
    return {"pair": smp.sample_commuting(cfg, rng)}


def _s4_input(cfg, rng):
    return {
        "a": smp.sample_normal(cfg, rng),
        "b": smp.sample_normal(cfg, rng),
        "x": smp.sample_general(cfg, rng),
        "alpha": smp.AngleParam(float(rng.uniform(0.0, 2.0 * math.pi))),
        "beta": smp.AngleParam(float(rng.uniform(0.0, 2.0 * math.pi))),
    }


def _signed(fn, sign):
    return lambda **kw: fn(sign, **kw)


def _hs(sign, which):
    return lambda **kw: thm_hs_sides(sign, **kw)[which]


def _t2n(which):
    return lambda **kw: prop_t2n_sides(**kw)[which]


_HS = NormKind.schatten(2)
_OP = NormKind.operator()

STATEMENTS = {
    s.theorem_id: s
    for s in [
        Statement("thm1-plus", _pair_general, _signed(thm1_sides, "plus")),
        Statement("thm1-minus", _pair_general, _signed(thm1_sides, "minus")),
        Statement("remark1", _pair_general, remark1_sides, doubled=True),
        Statement("cor-c1-plus", _commuting, _signed(cor_c1_sides, "plus")),
        Statement("cor-c1-minus", _commuting, _signed(cor_c1_sides, "minus")),
        Statement("cor-c2", _single_general, cor_c2_sides),
        Statement("cor-c3-plus", _pair_only, _signed(cor_c3_sides, "plus")),
        Statement("cor-c3-minus", _pair_only, _signed(cor_c3_sides, "minus")),
        Statement("prop-c4", _positive_unitary, prop_c4_sides),
        Statement("thm-sum-plus", _pair_general, _signed(thm_sum_sides, "plus")),
        Statement("thm-sum-minus", _pair_general, _signed(thm_sum_sides, "minus")),
        Statement("prop-t2n-bound1", _pair_general, _t2n(0)),
        Statement("prop-t2n-bound2", _pair_general, _t2n(1)),
        Statement("thm-hs-plus-first", _hermitian_pair, _hs("plus", 0), fixed_norm=_HS),
        Statement("thm-hs-plus-second", _hermitian_pair, _hs("plus", 1), fixed_norm=_HS),
        Statement("thm-hs-minus-first", _hermitian_pair, _hs("minus", 0), fixed_norm=_HS),
        Statement("thm-hs-minus-second", _hermitian_pair, _hs("minus", 1), fixed_norm=_HS),
        Statement("lemma-andozhan", _psd_pair, andozhan_sides),
        Statement("lemma-bouldin", _normal_pair, bouldin_sides),
        Statement("lemma-halfsum", _general_pair, halfsum_sides, doubled=True),
        Statement("lemma-resolvent", _resolvent_input, resolvent_sides, fixed_norm=_OP),
        Statement("lemma-conjugation", _conjugation_input, conjugation_sides),
        Statement("lemma-fugledeputnam", _fuglede_input, fugledeputnam_sides),
        Statement("lemma-s4", _s4_input, s4_sides),
    ]
}

LEMMA_IDS = tuple(k for k in STATEMENTS if k.startswith("lemma-"))


def get_statement(theorem_id):
    try:
        return STATEMENTS[theorem_id]
    except KeyError:
        raise DomainError(f"unknown theorem id {theorem_id!r}") from None


def run_trial(theorem_id, cfg, trial_index, kinds=None):
    """Sample the inputs of one seeded trial and evaluate them."""
    st = get_statement(theorem_id)
    rng = smp.stream(cfg.seed, trial_index)
    params = st.sample(cfg, rng)
    if kinds is None:
        kinds = st.kinds(cfg.dim)
    return st.reports(params, cfg.dim, kinds, cfg.seed, trial_index)


def check_lemma_suite(cfg, trial_index=0, kinds=None):
    """Every proof-ingredient check on one seeded trial."""
    out = []
    for lid in LEMMA_IDS:
        fixed = STATEMENTS[lid].fixed_norm is not None
        out.extend(run_trial(lid, cfg, trial_index, None if fixed else kinds))
    return out
