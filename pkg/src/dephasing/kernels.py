"""
Quadrature engine for the continuum decoherence and phase functionals.

Every functional reduces, through product-to-sum identities, to three
single-frequency integrals over the spectral density I_d(x):

    gamma_primitive(u) = int I_d(x) w(x) (1 - cos ux) / x**2 dx   (= single-qubit Gamma)
    cos_moment(u)      = int I_d(x) cos(ux) / x dx
    sin_moment(u)      = int I_d(x) sin(ux) / x**2 dx

with w the fluctuation weight (coth, 1 or 2<N>). The register-level
functionals are then assembled by `assemble`, which works with any object
providing these three primitives (quadrature here, closed forms in
closedform.ClosedFormPrimitives).

The integrals run over [0, X] with X = cutoff_multiplier * max(1, theta).
They use Gauss-Legendre panels no wider than half a period of the
oscillating factor, geometric grading below theta, and panel bisection
driven by an n vs 2n node error estimate. When the panel count would exceed
max_subdivisions the far range is handed to QUADPACK's Fourier routine.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Protocol

import numpy as np
from scipy import integrate

from bath import BathSpec, fluctuation_weight

if TYPE_CHECKING:
    from register import CoherenceLabel, RegisterGeometry

logger = logging.getLogger(__name__)

# Gamma is a sum of squares; anything below this is rounding noise
NEGATIVE_GAMMA_TOLERANCE = 1e-12

# Relative argument below which the kernels switch to series
KERNEL_SERIES_CROSSOVER = 1e-2

# Geometric grading points theta * 2**k, k >= GRADING_MIN_POWER
GRADING_MIN_POWER = -12

BASE_PANEL_WIDTH = 1.0


class QuadratureError(RuntimeError):
    """Raised when an integral fails to reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate:.6g}, error={error:.3g})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerances and truncation for the frequency integrals.

    Attributes:
        abs_tol: Absolute error target per integral.
        rel_tol: Relative error target per integral.
        max_subdivisions: Panel budget before the far range goes to QUADPACK.
        cutoff_multiplier: Upper limit X = cutoff_multiplier * max(1, theta).
        order: Gauss-Legendre nodes per panel (the error check uses 2 * order).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 50_000
    cutoff_multiplier: float = 60.0
    order: int = 16

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError(
                f"Tolerances must be positive, got abs_tol={self.abs_tol}, rel_tol={self.rel_tol}"
            )
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")
        if self.cutoff_multiplier <= 0:
            raise ValueError(
                f"cutoff_multiplier must be positive, got {self.cutoff_multiplier}"
            )
        if self.order < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class DecoherenceFunctions:
    """Damping exponent and phases of one coherence at one time point."""

    gamma: float
    theta_phase: float
    lambda_phase: float

    @property
    def aleph(self) -> float:
        return self.theta_phase - self.lambda_phase


def kernel_s(x, tau):
    """
    s(x, tau) = (x tau - sin x tau) / x**2.

    Uses tau**2 (u/6 - u**3/120 + u**5/5040) with u = x tau for small u.
    """
    xs = np.asarray(x, dtype=float)
    taus = np.asarray(tau, dtype=float)
    u = xs * taus
    small = np.abs(u) < KERNEL_SERIES_CROSSOVER
    u2 = u * u
    series = taus**2 * u * (1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (u - np.sin(u)) / (xs * xs)
    out = np.where(small, series, direct)
    if np.ndim(out) == 0:
        return float(out)
    return out


def kernel_c(x, tau):
    """
    c(x, tau) = (1 - cos x tau) / x**2, written as (tau**2 / 2) sinc(x tau / 2)**2.

    The sinc form is free of cancellation, including the x -> 0 limit tau**2 / 2.
    """
    xs = np.asarray(x, dtype=float)
    taus = np.asarray(tau, dtype=float)
    out = 0.5 * taus**2 * np.sinc(xs * taus / (2.0 * np.pi)) ** 2
    if np.ndim(out) == 0:
        return float(out)
    return out


@lru_cache(maxsize=8)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _gauss_panels(f, a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    nodes, weights = _legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    return half * (f(x) @ weights)


def _initial_edges(upper: float, width: float, theta: float) -> np.ndarray:
    count = int(np.ceil(upper / width))
    edges = np.linspace(0.0, count * width, count + 1)
    edges[-1] = upper
    if theta > 0:
        first = edges[1]
        powers = theta * 2.0 ** np.arange(GRADING_MIN_POWER, 64)
        edges = np.union1d(edges, powers[powers < first])
    return edges


def integrate_panels(
    f,
    lower: float,
    upper: float,
    width: float,
    theta: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> tuple[float, float]:
    """
    Integrate a vectorised f over [lower, upper] with adaptive Gauss-Legendre panels.

    Args:
        f: Callable taking an array of abscissae and returning integrand values.
        lower: Lower limit (usually 0; the integrand is never evaluated there).
        upper: Upper limit.
        width: Initial panel width, at most half a period of the oscillation.
        theta: Temperature ratio, used to grade panels below the thermal scale.
        config: Tolerances and panel budget.

    Returns:
        (value, error estimate)

    Raises:
        QuadratureError: If the panel budget is exhausted before convergence.
    """
    edges = lower + _initial_edges(upper - lower, width, theta)
    a, b = edges[:-1], edges[1:]
    span = upper - lower
    total = 0.0
    error = 0.0
    panels = len(a)
    while len(a):
        coarse = _gauss_panels(f, a, b, config.order)
        fine = _gauss_panels(f, a, b, 2 * config.order)
        err = np.abs(fine - coarse)
        share = (b - a) / span
        allowed = np.maximum(config.abs_tol, config.rel_tol * np.abs(fine)) * np.maximum(
            share, 1e-3
        )
        done = (err <= allowed) | ((b - a) < 1e-14 * max(1.0, upper))
        total += float(fine[done].sum())
        error += float(err[done].sum())
        a, b = a[~done], b[~done]
        if not len(a):
            break
        panels += len(a)
        if panels > 4 * config.max_subdivisions:
            estimate = total + float(fine[~done].sum())
            raise QuadratureError(
                "Panel budget exhausted", estimate, error + float(err[~done].sum())
            )
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    return total, error


def _quad_checked(
    func, a: float, b: float, config: QuadratureConfig, scale: float = 0.0, **kwargs
) -> tuple[float, float]:
    """
    QUADPACK on [a, b], raising when the error misses the target.

    scale is the magnitude of the integral this piece belongs to; the relative
    target applies to max(|value|, scale), so a near-cancelling oscillatory
    piece is judged against the total it is added to.
    """
    result = integrate.quad(
        func,
        a,
        b,
        epsabs=config.abs_tol,
        epsrel=config.rel_tol,
        limit=200,
        full_output=1,
        **kwargs,
    )
    value, err = result[0], result[1]
    if len(result) > 3 and err > max(config.abs_tol, config.rel_tol * max(abs(value), scale)):
        raise QuadratureError(f"QUADPACK did not converge: {result[3]}", value, err)
    return value, err


class QuadraturePrimitives:
    """
    Single-frequency integrals of one bath, evaluated numerically.

    Instances memoise by frequency, so assembling several functionals at the
    same time point reuses the shared integrals.
    """

    source = "quadrature"

    def __init__(self, bath: BathSpec, config: QuadratureConfig = DEFAULT_CONFIG):
        self.bath = bath
        self.config = config
        self._cache: dict[tuple, float] = {}

    def upper_limit(self, fluctuations: str = "total") -> float:
        theta = self.bath.theta
        if fluctuations == "thermal" and theta > 0:
            # 2<N> adds an exp(-x/theta) decay on top of exp(-x)
            return self.config.cutoff_multiplier * theta / (1.0 + theta)
        return self.config.cutoff_multiplier * max(1.0, theta)

    def _check_tail(self, upper: float, weight_at_upper: float, label: str) -> None:
        bath = self.bath
        bound = bath.c * upper ** (bath.d - 1) * np.exp(-upper) * weight_at_upper
        if bound > self.config.abs_tol:
            logger.warning(
                "Truncation tail of %s integral at X=%.4g is %.3g (> abs_tol %.3g)",
                label,
                upper,
                bound,
                self.config.abs_tol,
            )

    def _integrate(self, key: tuple, integrand, u: float, upper: float, tail) -> float:
        """
        Integrate a vectorised integrand over [0, upper], memoised under key.

        tail(a, b, scale) integrates the same function over [a, b] with
        QUADPACK and is only used when the panel count would exceed
        max_subdivisions. scale is |head|, the size of the part already summed.
        """
        if key in self._cache:
            return self._cache[key]
        config = self.config
        theta = self.bath.theta
        omega = abs(u)
        width = BASE_PANEL_WIDTH if omega == 0 else min(np.pi / omega, BASE_PANEL_WIDTH)

        if upper / width <= config.max_subdivisions:
            value, _ = integrate_panels(integrand, 0.0, upper, width, theta, config)
        else:
            split = config.max_subdivisions * width
            head, _ = integrate_panels(integrand, 0.0, split, width, theta, config)
            logger.debug("Fourier tail on [%.4g, %.4g] for u=%.4g", split, upper, u)
            value = head + tail(split, upper, abs(head))
        self._cache[key] = value
        return value

    def _scalar(self, f):
        def scalar(x: float) -> float:
            return float(f(np.asarray([x], dtype=float))[0])

        return scalar

    def gamma(self, u: float, fluctuations: str = "total") -> float:
        """int I_d(x) w(x) (1 - cos ux) / x**2 dx, the single-qubit damping exponent."""
        u = abs(float(u))
        bath = self.bath
        if u == 0 or (fluctuations == "thermal" and bath.is_vacuum):
            return 0.0
        upper = self.upper_limit(fluctuations)
        key = ("gamma", fluctuations, u)
        if key in self._cache:
            return self._cache[key]
        weight_at_upper = float(fluctuation_weight(bath.theta, upper, fluctuations))
        self._check_tail(upper, 2.0 * weight_at_upper / upper, "gamma")

        def profile(x):
            return bath.c * x ** (bath.d - 2) * np.exp(-x) * fluctuation_weight(bath.theta, x, fluctuations)

        def integrand(x):
            return bath.c * x**bath.d * np.exp(-x) * fluctuation_weight(bath.theta, x, fluctuations) * kernel_c(x, u)

        def tail(a: float, b: float, scale: float) -> float:
            # (1 - cos ux) / x**2 splits into a plain part and a cosine-weighted part
            scalar = self._scalar(profile)
            plain, _ = _quad_checked(scalar, a, b, self.config, scale)
            oscillating, _ = _quad_checked(
                scalar, a, b, self.config, max(scale, abs(plain)), weight="cos", wvar=u
            )
            return plain - oscillating

        return self._integrate(key, integrand, u, upper, tail)

    def cos_moment(self, u: float) -> float:
        """int I_d(x) cos(ux) / x dx (even in u)."""
        u = abs(float(u))
        bath = self.bath
        upper = self.upper_limit()
        key = ("cos", u)
        if key in self._cache:
            return self._cache[key]
        self._check_tail(upper, 1.0, "cos moment")

        def profile(x):
            return bath.c * x ** (bath.d - 1) * np.exp(-x)

        def integrand(x):
            return profile(x) * np.cos(u * x)

        def tail(a: float, b: float, scale: float) -> float:
            return _quad_checked(self._scalar(profile), a, b, self.config, scale, weight="cos", wvar=u)[0]

        return self._integrate(key, integrand, u, upper, tail)

    def sin_moment(self, u: float) -> float:
        """int I_d(x) sin(ux) / x**2 dx (odd in u)."""
        u = float(u)
        if u == 0:
            return 0.0
        if u < 0:
            return -self.sin_moment(-u)
        bath = self.bath
        upper = self.upper_limit()
        key = ("sin", u)
        if key in self._cache:
            return self._cache[key]
        self._check_tail(upper, 1.0 / upper, "sin moment")

        def profile(x):
            return bath.c * x ** (bath.d - 2) * np.exp(-x)

        def integrand(x):
            return profile(x) * np.sin(u * x)

        def tail(a: float, b: float, scale: float) -> float:
            return _quad_checked(self._scalar(profile), a, b, self.config, scale, weight="sin", wvar=u)[0]

        return self._integrate(key, integrand, u, upper, tail)


class Primitives(Protocol):
    """Anything that supplies the three single-frequency integrals of a bath."""

    bath: BathSpec
    source: str

    def gamma(self, u: float, fluctuations: str = "total") -> float: ...

    def cos_moment(self, u: float) -> float: ...

    def sin_moment(self, u: float) -> float: ...


def _clamp_gamma(gamma: float) -> float:
    if gamma < -NEGATIVE_GAMMA_TOLERANCE * max(1.0, abs(gamma)):
        raise QuadratureError("Damping exponent came out negative", gamma, abs(gamma))
    return max(gamma, 0.0)


def single_theta(primitives: Primitives, tau: float) -> float:
    """Theta_d(tau) = tau * cos_moment(0) - sin_moment(tau)."""
    if tau == 0:
        return 0.0
    return tau * primitives.cos_moment(0.0) - primitives.sin_moment(tau)


def pair_gamma_cross(primitives: Primitives, tau: float, tau_s: float, fluctuations: str = "total") -> float:
    """int I w c(x,tau) cos(x tau_s) dx = P(tau+ts)/2 + P(|tau-ts|)/2 - P(ts)."""
    if tau_s == 0:
        return primitives.gamma(tau, fluctuations)
    return (
        0.5 * primitives.gamma(tau + tau_s, fluctuations)
        + 0.5 * primitives.gamma(abs(tau - tau_s), fluctuations)
        - primitives.gamma(tau_s, fluctuations)
    )


def pair_theta_cross(primitives: Primitives, tau: float, tau_s: float) -> float:
    """int I s(x,tau) cos(x tau_s) dx."""
    return (
        tau * primitives.cos_moment(tau_s)
        - 0.5 * primitives.sin_moment(tau + tau_s)
        - 0.5 * primitives.sin_moment(tau - tau_s)
    )


def pair_lambda_cross(primitives: Primitives, tau: float, tau_s: float) -> float:
    """int I c(x,tau) sin(x tau_s) dx."""
    if tau_s == 0:
        return 0.0
    return (
        primitives.sin_moment(tau_s)
        - 0.5 * primitives.sin_moment(tau_s + tau)
        - 0.5 * primitives.sin_moment(tau_s - tau)
    )


def assemble(
    primitives: Primitives,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    tau: float,
    fluctuations: str = "total",
) -> DecoherenceFunctions:
    """
    Assemble Gamma, Theta and Lambda for an independently coupled register.

    Pairs run over m < n in qubit order, which is also the order in which a
    mode propagating along the register reaches the qubits.
    """
    if label.size != geometry.size:
        raise ValueError(
            f"Label has {label.size} qubits but geometry has {geometry.size}"
        )
    tau = float(tau)
    if tau < 0:
        raise ValueError(f"Time must be >= 0, got tau={tau!r}")
    if tau == 0 or label.is_diagonal:
        return DecoherenceFunctions(0.0, 0.0, 0.0)

    i, j = label.i, label.j
    delta = i - j
    single = primitives.gamma(tau, fluctuations)
    gamma = float(np.sum(delta**2)) * single
    theta_phase = 0.0
    lambda_phase = 0.0
    for m in range(label.size):
        for n in range(m + 1, label.size):
            ts = float(geometry.transit[m, n])
            weight_g = delta[m] * delta[n]
            if weight_g:
                gamma += 2.0 * weight_g * pair_gamma_cross(primitives, tau, ts, fluctuations)
            weight_t = i[m] * i[n] - j[m] * j[n]
            if weight_t:
                theta_phase += 2.0 * weight_t * pair_theta_cross(primitives, tau, ts)
            weight_l = i[n] * j[m] - i[m] * j[n]
            if weight_l and ts:
                lambda_phase += 2.0 * weight_l * pair_lambda_cross(primitives, tau, ts)
    return DecoherenceFunctions(_clamp_gamma(gamma), theta_phase, lambda_phase)


def assemble_collective(
    primitives: Primitives,
    label: CoherenceLabel,
    tau: float,
    fluctuations: str = "total",
) -> DecoherenceFunctions:
    """Collective coupling: Gamma_d [sum(i-j)]**2 and Theta_d [(sum i)**2 - (sum j)**2]."""
    tau = float(tau)
    if tau < 0:
        raise ValueError(f"Time must be >= 0, got tau={tau!r}")
    damping = float(np.sum(label.i - label.j) ** 2)
    phase_weight = float(np.sum(label.i) ** 2 - np.sum(label.j) ** 2)
    gamma = damping * primitives.gamma(tau, fluctuations) if damping and tau else 0.0
    theta_phase = phase_weight * single_theta(primitives, tau) if phase_weight else 0.0
    return DecoherenceFunctions(_clamp_gamma(gamma), theta_phase, 0.0)


def gamma_single(bath: BathSpec, tau: float, fluctuations: str = "total", config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Single-qubit damping exponent Gamma_d(tau; theta)."""
    if tau < 0:
        raise ValueError(f"Time must be >= 0, got tau={tau!r}")
    return _clamp_gamma(QuadraturePrimitives(bath, config).gamma(tau, fluctuations))


def gamma_collective(bath: BathSpec, tau: float, fluctuations: str = "total", config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Register-independent collective damping functional; identical to gamma_single."""
    return gamma_single(bath, tau, fluctuations, config)


def theta_collective(bath: BathSpec, tau: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Collective phase functional Theta_d(tau) = int I_d s(x, tau) dx."""
    if tau < 0:
        raise ValueError(f"Time must be >= 0, got tau={tau!r}")
    return single_theta(QuadraturePrimitives(bath, config), tau)


def independent_functions(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    tau: float,
    fluctuations: str = "total",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> DecoherenceFunctions:
    return assemble(QuadraturePrimitives(bath, config), geometry, label, tau, fluctuations)


def gamma_independent(bath, geometry, label, tau, fluctuations: str = "total", config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return independent_functions(bath, geometry, label, tau, fluctuations, config).gamma


def theta_independent(bath, geometry, label, tau, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return independent_functions(bath, geometry, label, tau, config=config).theta_phase


def lambda_independent(bath, geometry, label, tau, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return independent_functions(bath, geometry, label, tau, config=config).lambda_phase
