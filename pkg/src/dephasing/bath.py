"""
Dimensionless bosonic bath model.

Everything is measured in units of the cutoff frequency (omega_c = 1):
frequencies x = omega/omega_c, times tau = omega_c t, temperatures
theta = omega_T/omega_c with omega_T = k_B T/hbar.

The spectral density is I_d(x) = c * x**d * exp(-x). Thermal fluctuations
enter through coth(x/2theta) = 1 + 2<N>, which is split into a vacuum part
(1) and a thermal part (2<N>).
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

CLOSED_FORM_DIMENSIONS = (1, 3)
FLUCTUATIONS = ("total", "vacuum", "thermal")

# Below this value of x/(2 theta), coth is taken from its Laurent series
SERIES_CROSSOVER = 1e-4


@dataclass(frozen=True)
class BathSpec:
    """
    Bath description in cutoff units.

    Attributes:
        d: Dimensionality of the density of states (1 Ohmic, 3 super-Ohmic).
        c: Coupling strength (c_1 or c_3, all hbar and omega_c factors folded in).
        theta: Temperature ratio omega_T/omega_c; 0 means pure vacuum.
    """

    d: int
    c: float
    theta: float

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"Bath dimensionality must be an integer >= 1, got {self.d!r}")
        if not np.isfinite(self.c) or self.c <= 0:
            raise ValueError(f"Coupling must be positive, got c={self.c!r}")
        if not np.isfinite(self.theta) or self.theta < 0:
            raise ValueError(f"Temperature ratio must be >= 0, got theta={self.theta!r}")

    @property
    def has_closed_form(self) -> bool:
        return self.d in CLOSED_FORM_DIMENSIONS

    @property
    def is_vacuum(self) -> bool:
        return self.theta == 0


def _as_frequency(x, strict: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    bad = (x <= 0) if strict else (x < 0)
    if np.any(bad):
        bound = "> 0" if strict else ">= 0"
        raise ValueError(f"Frequency must be {bound}, got {x[bad].ravel()[0]!r}")
    return x


def _scalar_or_array(values: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(values)
    return values


def spectral_density(bath: BathSpec, x):
    """
    I_d(x) = c * x**d * exp(-x).

    Raises:
        ValueError: If any x is negative.
    """
    xs = _as_frequency(x, strict=False)
    return _scalar_or_array(bath.c * xs**bath.d * np.exp(-xs), x)


def occupation(theta: float, x):
    """
    Bose-Einstein occupation <N> = 1/(exp(x/theta) - 1); zero in vacuum.

    Raises:
        ValueError: If any x <= 0 or theta < 0.
    """
    if theta < 0:
        raise ValueError(f"Temperature ratio must be >= 0, got theta={theta!r}")
    xs = _as_frequency(x, strict=True)
    if theta == 0:
        return _scalar_or_array(np.zeros_like(xs), x)
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(xs / theta)
    return _scalar_or_array(n, x)


def thermal_weight(theta: float, x):
    """
    coth(x/(2 theta)), exactly 1 when theta = 0.

    Small x/theta uses 2theta/x + x/(6theta) - (x/2theta)**3/45, which keeps
    the omega -> 0 end of the quadrature integrands smooth.

    Raises:
        ValueError: If any x <= 0 or theta < 0.
    """
    if theta < 0:
        raise ValueError(f"Temperature ratio must be >= 0, got theta={theta!r}")
    xs = _as_frequency(x, strict=True)
    if theta == 0:
        return _scalar_or_array(np.ones_like(xs), x)
    y = xs / (2.0 * theta)
    small = y < SERIES_CROSSOVER
    with np.errstate(over="ignore", divide="ignore"):
        direct = 1.0 + 2.0 / np.expm1(2.0 * y)
    series = 1.0 / y + y / 3.0 - y**3 / 45.0
    return _scalar_or_array(np.where(small, series, direct), x)


def fluctuation_weight(theta: float, x, fluctuations: str = "total"):
    """
    Weight multiplying I_d(x) in the damping integrand.

    "total" is coth(x/2theta), "vacuum" is 1 and "thermal" is 2<N>, so that
    total = vacuum + thermal.
    """
    if fluctuations == "total":
        return thermal_weight(theta, x)
    if fluctuations == "vacuum":
        xs = _as_frequency(x, strict=True)
        return _scalar_or_array(np.ones_like(xs), x)
    if fluctuations == "thermal":
        if theta == 0:
            return occupation(theta, x)
        xs = _as_frequency(x, strict=True)
        y = xs / (2.0 * theta)
        small = y < SERIES_CROSSOVER
        with np.errstate(over="ignore", divide="ignore"):
            direct = 2.0 / np.expm1(2.0 * y)
        series = 1.0 / y - 1.0 + y / 3.0 - y**3 / 45.0
        return _scalar_or_array(np.where(small, series, direct), x)
    raise ValueError(f"fluctuations must be one of {FLUCTUATIONS}, got {fluctuations!r}")
