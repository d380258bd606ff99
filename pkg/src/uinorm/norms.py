"""Unitarily invariant norms and Ky Fan dominance."""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .linalg import as_matrix, singular_values, within_slack

_VARIANTS = ("operator", "kyfan", "schatten")


@dataclass(frozen=True)
class NormKind:
    """Selector for the operator norm, a Ky Fan k-norm or a Schatten p-norm.

    ``Schatten(inf)`` is normalized to the operator norm.
    """

    variant: str
    param: float = 0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise DomainError(f"unknown norm variant {self.variant!r}")
        if self.variant == "kyfan":
            if int(self.param) != self.param or self.param < 1:
                raise DomainError(f"Ky Fan index must be a positive integer, got {self.param}")
            object.__setattr__(self, "param", int(self.param))
        elif self.variant == "schatten":
            p = float(self.param)
            if math.isnan(p) or p < 1:
                raise DomainError(f"Schatten exponent must be >= 1, got {self.param}")
            if math.isinf(p):
                object.__setattr__(self, "variant", "operator")
                object.__setattr__(self, "param", 0)
            else:
                object.__setattr__(self, "param", int(p) if p.is_integer() else p)
        else:
            object.__setattr__(self, "param", 0)

    @classmethod
    def operator(cls):
        return cls("operator")

    @classmethod
    def ky_fan(cls, k):
        return cls("kyfan", k)

    @classmethod
    def schatten(cls, p):
        return cls("schatten", p)

    @classmethod
    def parse(cls, text):
        """Inverse of ``str``: ``"operator"``, ``"kyfan:3"``, ``"schatten:2"``."""
        name, _, arg = text.strip().lower().partition(":")
        if name == "operator" and not arg:
            return cls.operator()
        if name in ("kyfan", "schatten") and arg:
            try:
                value = float(arg)
            except ValueError:
                raise DomainError(f"bad norm parameter in {text!r}") from None
            return cls(name, value)
        raise DomainError(f"cannot parse norm kind {text!r}")

    def __str__(self):
        if self.variant == "operator":
            return "operator"
        return f"{self.variant}:{self.param}"

    def from_singular_values(self, s):
        """Evaluate the norm on a non-increasing singular-value sequence."""
        s = np.asarray(s, dtype=np.float64)
        if self.variant == "operator":
            return float(s[0]) if s.size else 0.0
        if self.variant == "kyfan":
            # s_j = 0 beyond the matrix size
            return float(math.fsum(s[: self.param]))
        p = self.param
        if p == 1:
            return float(math.fsum(s))
        top = float(s[0]) if s.size else 0.0
        if top == 0.0:
            return 0.0
        return top * float(math.fsum((s / top) ** p)) ** (1.0 / p)


def norm(a, kind):
    """Unitarily invariant norm of ``a``."""
    return kind.from_singular_values(singular_values(as_matrix(a)))


def norm_suite(n):
    """Operator, Schatten 1/2/3 and every Ky Fan k-norm for ``n x n`` inputs."""
    if n < 1:
        raise DomainError(f"matrix size must be >= 1, got {n}")
    kinds = [NormKind.operator(), NormKind.schatten(1), NormKind.schatten(2), NormKind.schatten(3)]
    kinds.extend(NormKind.ky_fan(k) for k in range(1, n + 1))
    return kinds


class Dominance(NamedTuple):
    holds: bool
    violation: float


def ky_fan_dominates(a, b):
    """Check ``||a||_(k) <= ||b||_(k)`` for every k, under the slack rule.

    ``violation`` is the largest positive Ky Fan gap ``||a||_(k) - ||b||_(k)``
    (zero when every gap is non-positive).
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected square matrices of equal size, got {a.shape} and {b.shape}")
    ka = np.cumsum(singular_values(a))
    kb = np.cumsum(singular_values(b))
    holds = all(within_slack(x, y) for x, y in zip(ka, kb))
    return Dominance(holds, float(max(0.0, np.max(ka - kb))))
