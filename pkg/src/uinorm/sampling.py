"""Seeded generation of structured random inputs.

Randomness comes from Philox4x64-10 (numpy's ``Philox`` bit generator), a
counter-based generator whose 128-bit key is ``(seed, trial_index)``.  Each
trial therefore owns an independent stream that can be regenerated without
replaying earlier trials, whatever the worker schedule.

Inputs are drawn as *parameters* (eigenvalues plus unitary eigenvectors,
raw entries, measure atoms) that know how to realize their matrix, how to
serialize themselves and how to take a small random step; the sharpness
search perturbs the same objects the samplers create.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .calculus import TWO_PI, HerglotzMeasure
from .errors import DomainError
from .linalg import SpectralDecomposition, eigh

MASK64 = (1 << 64) - 1
MAX_DIM = 16
MAX_ATOMS = 8


def stream(seed, trial_index=0):
    """Independent generator for ``(seed, trial_index)``."""
    key = np.array([seed & MASK64, trial_index & MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    dim: int
    min_gap: float = 0.05
    max_entry: float = 1.0

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise DomainError(f"dim must be in [1, {MAX_DIM}], got {self.dim}")
        if not 0.0 < self.min_gap < 1.0:
            raise DomainError(f"min_gap must be in (0, 1), got {self.min_gap}")
        if self.max_entry < 0.0:
            raise DomainError(f"max_entry must be nonnegative, got {self.max_entry}")

    @property
    def radius(self):
        """Largest admissible eigenvalue modulus."""
        return 1.0 - self.min_gap

    def rng(self):
        return stream(self.seed)


def _complex_gaussian(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _matrix_to_json(m):
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _matrix_from_json(d):
    return np.asarray(d["re"], dtype=np.float64) + 1j * np.asarray(d["im"], dtype=np.float64)


def _haar(rng, n):
    z = _complex_gaussian(rng, (n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * phases


def _geodesic_step(rng, u, step):
    n = u.shape[0]
    g = _complex_gaussian(rng, (n, n))
    h = 0.5 * (g + g.conj().T)
    w, v = eigh(h)
    return u @ ((v * np.exp(1j * step * w)) @ v.conj().T)


def _disk_points(rng, count, radius):
    # rejection from the bounding square
    out = np.empty(count, dtype=np.complex128)
    filled = 0
    while filled < count:
        x, y = rng.uniform(-1.0, 1.0, size=2)
        if x * x + y * y < 1.0:
            out[filled] = radius * complex(x, y)
            filled += 1
    return out


def _project_disk(lam, radius):
    mod = np.abs(lam)
    over = mod > radius
    lam = lam.copy()
    lam[over] *= radius / mod[over]
    return lam


def _hermitian_range(lo, hi, min_gap):
    if not -1.0 <= lo < hi <= 1.0:
        raise DomainError(f"need -1 <= lo < hi <= 1, got lo={lo}, hi={hi}")
    r = 1.0 - min_gap
    a = max(lo, -r)
    b = min(hi, r)
    if not a < b:
        raise DomainError(f"interval [{lo}, {hi}) leaves no room for spectral gap {min_gap}")
    return a, b


def _shrink_or_none(rng, lam):
    # contraction moves keep the zero-spectrum witness reachable
    u = rng.random()
    if u < 0.05:
        return np.zeros_like(lam)
    if u < 0.15:
        return lam * rng.random()
    return None


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NormalParam:
    """Normal matrix ``U diag(eigenvalues) U*`` with ``|eigenvalues| <= radius``."""

    eigenvalues: np.ndarray
    unitary: np.ndarray
    radius: float

    def matrix(self):
        u = self.unitary
        return (u * self.eigenvalues) @ u.conj().T

    def decomposition(self):
        return SpectralDecomposition(self.eigenvalues, self.unitary)

    def perturbed(self, rng, step):
        lam = _shrink_or_none(rng, self.eigenvalues)
        if lam is None:
            lam = self.eigenvalues + step * self.radius * _complex_gaussian(rng, self.eigenvalues.shape)
        return replace(
            self,
            eigenvalues=_project_disk(lam, self.radius),
            unitary=_geodesic_step(rng, self.unitary, step),
        )

    def scaled(self, factor):
        return replace(self, eigenvalues=self.eigenvalues * factor)

    def to_json(self):
        return {
            "type": "normal",
            "radius": self.radius,
            "eigenvalues": _matrix_to_json(self.eigenvalues.reshape(1, -1)),
            "unitary": _matrix_to_json(self.unitary),
        }


@dataclass(frozen=True, eq=False)
class HermitianParam:
    """Hermitian matrix with eigenvalues in ``[lo, hi]``."""

    eigenvalues: np.ndarray
    unitary: np.ndarray
    lo: float
    hi: float

    def matrix(self):
        u = self.unitary
        out = (u * self.eigenvalues) @ u.conj().T
        return 0.5 * (out + out.conj().T)

    def decomposition(self):
        return SpectralDecomposition(self.eigenvalues.astype(np.complex128), self.unitary)

    def perturbed(self, rng, step):
        lam = _shrink_or_none(rng, self.eigenvalues)
        if lam is None:
            lam = self.eigenvalues + step * (self.hi - self.lo) * rng.standard_normal(self.eigenvalues.shape)
        return replace(
            self,
            eigenvalues=np.clip(lam, self.lo, self.hi),
            unitary=_geodesic_step(rng, self.unitary, step),
        )

    def scaled(self, factor):
        return replace(self, eigenvalues=self.eigenvalues * factor)

    def to_json(self):
        return {
            "type": "hermitian",
            "lo": self.lo,
            "hi": self.hi,
            "eigenvalues": self.eigenvalues.tolist(),
            "unitary": _matrix_to_json(self.unitary),
        }


@dataclass(frozen=True, eq=False)
class CommutingPairParam:
    """``A = U diag(eigenvalues) U*`` and ``X = U diag(partner) U*``."""

    eigenvalues: np.ndarray
    partner: np.ndarray
    unitary: np.ndarray
    radius: float
    scale: float

    def matrices(self):
        u = self.unitary
        uh = u.conj().T
        return (u * self.eigenvalues) @ uh, (u * self.partner) @ uh

    def perturbed(self, rng, step):
        lam = self.eigenvalues + step * self.radius * _complex_gaussian(rng, self.eigenvalues.shape)
        xi = self.partner + step * max(self.scale, 1e-300) * _complex_gaussian(rng, self.partner.shape)
        return replace(
            self,
            eigenvalues=_project_disk(lam, self.radius),
            partner=xi,
            unitary=_geodesic_step(rng, self.unitary, step),
        )

    def to_json(self):
        return {
            "type": "commuting",
            "radius": self.radius,
            "scale": self.scale,
            "eigenvalues": _matrix_to_json(self.eigenvalues.reshape(1, -1)),
            "partner": _matrix_to_json(self.partner.reshape(1, -1)),
            "unitary": _matrix_to_json(self.unitary),
        }


@dataclass(frozen=True, eq=False)
class UnitaryParam:
    unitary: np.ndarray

    def matrix(self):
        return self.unitary

    def perturbed(self, rng, step):
        return UnitaryParam(_geodesic_step(rng, self.unitary, step))

    def to_json(self):
        return {"type": "unitary", "unitary": _matrix_to_json(self.unitary)}


@dataclass(frozen=True, eq=False)
class GeneralParam:
    entries: np.ndarray
    scale: float

    def matrix(self):
        return self.entries

    def perturbed(self, rng, step):
        n = self.entries.shape[0]
        noise = _complex_gaussian(rng, self.entries.shape) * (max(self.scale, 1e-300) / math.sqrt(n))
        return replace(self, entries=self.entries + step * noise)

    def to_json(self):
        return {"type": "general", "scale": self.scale, "entries": _matrix_to_json(self.entries)}


@dataclass(frozen=True)
class AngleParam:
    value: float

    def perturbed(self, rng, step):
        return AngleParam(float((self.value + step * TWO_PI * rng.standard_normal()) % TWO_PI))

    def to_json(self):
        return {"type": "angle", "value": self.value}


@dataclass(frozen=True, eq=False)
class MeasureParam:
    measure: HerglotzMeasure

    def perturbed(self, rng, step):
        m = self.measure
        angles = m.angles + step * TWO_PI * rng.standard_normal(len(m))
        weights = m.weights * np.exp(step * 4.0 * rng.standard_normal(len(m)))
        if len(m) < MAX_ATOMS and rng.random() < 0.05:
            angles = np.append(angles, rng.uniform(0.0, TWO_PI))
            weights = np.append(weights, step * weights.sum())
        return MeasureParam(_measure(angles, weights))

    def to_json(self):
        return {"type": "measure", **self.measure.to_json()}


def _measure(angles, weights):
    angles = np.mod(angles, TWO_PI)
    angles[angles >= TWO_PI] = 0.0
    w = np.asarray(weights, dtype=np.float64)
    w = w / math.fsum(w)
    return HerglotzMeasure(angles, w)


def param_from_json(d):
    kind = d["type"]
    if kind == "normal":
        return NormalParam(_matrix_from_json(d["eigenvalues"])[0], _matrix_from_json(d["unitary"]), d["radius"])
    if kind == "hermitian":
        return HermitianParam(
            np.asarray(d["eigenvalues"], dtype=np.float64), _matrix_from_json(d["unitary"]), d["lo"], d["hi"]
        )
    if kind == "commuting":
        return CommutingPairParam(
            _matrix_from_json(d["eigenvalues"])[0],
            _matrix_from_json(d["partner"])[0],
            _matrix_from_json(d["unitary"]),
            d["radius"],
            d["scale"],
        )
    if kind == "unitary":
        return UnitaryParam(_matrix_from_json(d["unitary"]))
    if kind == "general":
        return GeneralParam(_matrix_from_json(d["entries"]), d["scale"])
    if kind == "angle":
        return AngleParam(d["value"])
    if kind == "measure":
        return MeasureParam(HerglotzMeasure(d["angles"], d["weights"]))
    raise DomainError(f"unknown parameter type {kind!r}")


# -- parameter samplers -----------------------------------------------------


def sample_normal(cfg, rng):
    lam = _disk_points(rng, cfg.dim, cfg.radius)
    return NormalParam(lam, _haar(rng, cfg.dim), cfg.radius)


def sample_hermitian(cfg, rng, lo=-0.999, hi=0.999):
    a, b = _hermitian_range(lo, hi, cfg.min_gap)
    lam = rng.uniform(a, b, size=cfg.dim)
    if hi < 1.0 - cfg.min_gap:
        b = math.nextafter(hi, lo)
    return HermitianParam(lam, _haar(rng, cfg.dim), a, b)


def sample_commuting(cfg, rng):
    lam = _disk_points(rng, cfg.dim, cfg.radius)
    u = _haar(rng, cfg.dim)
    xi = cfg.max_entry * _complex_gaussian(rng, cfg.dim)
    return CommutingPairParam(lam, xi, u, cfg.radius, cfg.max_entry)


def sample_general(cfg, rng):
    entries = _complex_gaussian(rng, (cfg.dim, cfg.dim)) * (cfg.max_entry / math.sqrt(cfg.dim))
    return GeneralParam(entries, cfg.max_entry)


def sample_measure(rng):
    k = int(rng.integers(1, MAX_ATOMS + 1))
    angles = rng.uniform(0.0, TWO_PI, size=k)
    weights = rng.exponential(size=k)
    return MeasureParam(_measure(angles, weights))


# -- public samplers ----------------------------------------------------------


def random_unitary(cfg, rng=None):
    """Haar unitary: QR of a complex Gaussian matrix with phase-fixed diagonal."""
    return _haar(rng or cfg.rng(), cfg.dim)


def random_normal_in_disk(cfg, rng=None):
    """Normal matrix with eigenvalues uniform in the disk of radius ``1 - min_gap``.

    Returns the matrix and the spectral decomposition it was built from.
    """
    p = sample_normal(cfg, rng or cfg.rng())
    return p.matrix(), p.decomposition()


def random_hermitian_in_interval(cfg, lo, hi, rng=None):
    """Hermitian matrix with eigenvalues uniform in ``[lo, hi)`` clipped to the gap."""
    return sample_hermitian(cfg, rng or cfg.rng(), lo, hi).matrix()


def random_commuting_normal_pair(cfg, rng=None):
    """Normal ``A`` in the disk and a normal ``X`` sharing its eigenbasis."""
    return sample_commuting(cfg, rng or cfg.rng()).matrices()


def random_general(cfg, rng=None):
    """I.i.d. standard complex Gaussian entries scaled by ``max_entry / sqrt(dim)``."""
    return sample_general(cfg, rng or cfg.rng()).matrix()


def random_herglotz(cfg=None, rng=None):
    """1 to 8 atoms, uniform angles, flat-Dirichlet weights."""
    if rng is None:
        rng = cfg.rng()
    return sample_measure(rng).measure
