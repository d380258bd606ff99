"""Herglotz-class functions of matrices.

Members of the class (analytic on the unit disk, positive real part,
value 1 at the origin) are represented by finite atomic probability measures
on the circle: ``f(z) = sum_j w_j (e^{i a_j} + z) / (e^{i a_j} - z)``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, ContourError, DomainError
from .linalg import (
    SpectralDecomposition,
    as_matrix,
    eig_normal,
    identity,
    op_norm,
    singular_values,
    solve,
)

TWO_PI = 2.0 * math.pi
MASS_TOL = 1e-12
DOUBLING_TOL = 1e-8
G1_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class HerglotzMeasure:
    """Atomic probability measure on ``[0, 2pi)``.

    Calling the measure evaluates the function it represents.
    """

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.angles, dtype=np.float64)).copy()
        w = np.atleast_1d(np.asarray(self.weights, dtype=np.float64)).copy()
        if a.shape != w.shape or a.ndim != 1 or a.size == 0:
            raise DomainError("angles and weights must be equal-length non-empty sequences")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(w))):
            raise DomainError("measure atoms must be finite")
        if np.any(a < 0.0) or np.any(a >= TWO_PI):
            raise DomainError("atom angles must lie in [0, 2pi)")
        if np.any(w < 0.0):
            raise DomainError("atom weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > MASS_TOL:
            raise DomainError(f"total mass must be 1, got {math.fsum(w)!r}")
        a.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "weights", w)

    @classmethod
    def point(cls, angle=0.0):
        return cls([angle % TWO_PI], [1.0])

    @classmethod
    def uniform(cls, count):
        return cls(TWO_PI * np.arange(count) / count, np.full(count, 1.0 / count))

    @classmethod
    def from_unnormalized(cls, angles, weights):
        w = np.asarray(weights, dtype=np.float64)
        return cls(np.mod(angles, TWO_PI), w / math.fsum(w))

    def __len__(self):
        return self.angles.size

    def __call__(self, z):
        return herglotz_eval(self, z)

    def __eq__(self, other):
        if not isinstance(other, HerglotzMeasure):
            return NotImplemented
        return np.array_equal(self.angles, other.angles) and np.array_equal(self.weights, other.weights)

    __hash__ = None

    def to_json(self):
        return {"angles": self.angles.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, data):
        return cls(data["angles"], data["weights"])


def herglotz_eval(m, z):
    """Evaluate the function represented by ``m`` at ``z`` (scalar or array).

    Uses ``(e + z)/(e - z) = 1 + 2z/(e - z)`` with unit total mass, so the
    value at the origin is exactly 1.
    """
    zs = np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(zs) >= 1.0):
        raise DomainError("Herglotz functions are evaluated inside the open unit disk only")
    e = np.exp(1j * m.angles)
    flat = zs.reshape(-1, 1)
    vals = 1.0 + 2.0 * ((flat / (e - flat)) @ m.weights)
    if zs.ndim == 0:
        return complex(vals[0])
    return vals.reshape(zs.shape)


def apply_spectral(m, d):
    """``U diag(f(lambda)) U*`` for a spectral decomposition ``d``."""
    lam = np.asarray(d.eigenvalues, dtype=np.complex128)
    if np.any(np.abs(lam) >= 1.0):
        raise DomainError("spectrum not inside unit disk")
    u = d.eigenvectors
    return (u * herglotz_eval(m, lam)) @ u.conj().T


def apply(m, a):
    """``f(A)`` for a normal matrix ``A`` via its spectral decomposition."""
    return apply_spectral(m, eig_normal(a))


def resolvent(a, z, scale=None):
    """``(zI - A)^{-1}``.

    Raises :class:`~uinorm.errors.SingularMatrixError` when ``z`` is
    numerically on the spectrum.
    """
    a = as_matrix(a)
    n = a.shape[0]
    return solve(z * identity(n) - a, identity(n), scale=scale)


def spectral_radius(a):
    # general (possibly non-normal) input: LAPACK eigenvalues
    return float(np.max(np.abs(np.linalg.eigvals(as_matrix(a)))))


def spectral_gap(eigenvalues):
    """Distance ``1 - max|lambda|`` from the spectrum to the unit circle."""
    lam = np.abs(np.atleast_1d(np.asarray(eigenvalues, dtype=np.complex128)))
    if lam.size == 0:
        raise DomainError("empty spectrum")
    if np.any(lam >= 1.0):
        raise DomainError("spectrum not inside unit disk")
    return float(np.min(1.0 - lam))


@dataclass(frozen=True)
class ContourSpec:
    """Circle ``|z| = radius`` sampled at ``nodes`` equispaced points."""

    radius: float
    nodes: int = 256

    def __post_init__(self):
        if not 0.0 < self.radius < 1.0:
            raise ContourError(f"contour radius must lie in (0, 1), got {self.radius}")
        if self.nodes < 16 or self.nodes % 2:
            raise ContourError(f"node count must be even and >= 16, got {self.nodes}")

    @classmethod
    def around(cls, a, nodes=256):
        """Default contour: radius midway between the spectral radius and 1."""
        return cls(0.5 * (spectral_radius(a) + 1.0), nodes)


def _contour_sum(f, a, radius, nodes):
    n = a.shape[0]
    scale = op_norm(a) + radius
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(nodes):
        z = radius * complex(math.cos(TWO_PI * k / nodes), math.sin(TWO_PI * k / nodes))
        out += (f(z) * z) * resolvent(a, z, scale=scale)
    return out / nodes


def riesz_dunford(f, a, c, check=True):
    """Trapezoidal quadrature of ``(1/2 pi i) * contour integral f(z)(z - A)^{-1} dz``.

    With ``check`` the rule is also evaluated on ``2N`` nodes and an
    :class:`~uinorm.errors.AccuracyError` is raised when the two differ by
    more than ``1e-8`` in operator norm.  The ``N``-node value is returned.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DomainError("Riesz-Dunford calculus needs a square matrix")
    rho = spectral_radius(a)
    if rho >= c.radius:
        raise ContourError(f"spectral radius {rho:.6g} is not inside contour radius {c.radius:.6g}")
    if not check:
        return _contour_sum(f, a, c.radius, c.nodes)
    n = a.shape[0]
    scale = op_norm(a) + c.radius
    m = 2 * c.nodes
    coarse = np.zeros((n, n), dtype=np.complex128)
    fine = np.zeros((n, n), dtype=np.complex128)
    for k in range(m):
        z = c.radius * complex(math.cos(TWO_PI * k / m), math.sin(TWO_PI * k / m))
        term = (f(z) * z) * resolvent(a, z, scale=scale)
        fine += term
        if k % 2 == 0:
            coarse += term
    coarse /= c.nodes
    fine /= m
    diff = op_norm(coarse - fine)
    if diff > DOUBLING_TOL:
        raise AccuracyError(f"quadrature changed by {diff:.3e} when doubling to {m} nodes")
    return coarse


@dataclass(frozen=True)
class GOneCertificate:
    """Resolvent growth check on a probe grid.

    ``deviations`` are signed values ``||(z - A)^{-1}|| dist(z, sigma) - 1``.
    """

    grid: np.ndarray
    deviations: np.ndarray
    max_deviation: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_deviation", float(np.max(np.abs(self.deviations))))

    @property
    def certified(self):
        return self.max_deviation <= G1_TOL


def g1_certify(a, probes=32, seed=0, points=None, min_dist=0.05):
    """Probe the growth condition ``||(z - A)^{-1}|| = 1/dist(z, sigma(A))``.

    The grid holds ``probes`` unit-circle points plus ``probes`` random
    points of the box ``[-2, 2]^2`` at distance at least ``min_dist`` from
    the spectrum; explicit ``points`` replace the grid.
    """
    a = as_matrix(a)
    if points is None and probes < 8:
        raise DomainError(f"need at least 8 probes, got {probes}")
    lam = np.linalg.eigvals(a)
    if points is None:
        rng = np.random.default_rng(seed)
        grid = list(np.exp(1j * TWO_PI * np.arange(probes) / probes))
        while len(grid) < 2 * probes:
            z = complex(*rng.uniform(-2.0, 2.0, size=2))
            if np.min(np.abs(z - lam)) >= min_dist:
                grid.append(z)
        grid = np.asarray(grid)
    else:
        grid = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    devs = np.empty(grid.size)
    for i, z in enumerate(grid):
        dist = float(np.min(np.abs(z - lam)))
        devs[i] = singular_values(resolvent(a, z))[0] * dist - 1.0
    return GOneCertificate(grid, devs)


__all__ = [
    "ContourSpec",
    "GOneCertificate",
    "HerglotzMeasure",
    "SpectralDecomposition",
    "apply",
    "apply_spectral",
    "g1_certify",
    "herglotz_eval",
    "resolvent",
    "riesz_dunford",
    "spectral_gap",
    "spectral_radius",
]
