"""
Analytic decoherence functions for Ohmic (d=1) and super-Ohmic (d=3) baths.

Single qubit:
    d=1 (low temperature): Gamma_1 = c1 [2 th tau atan(2 th tau) + 1/2 ln((1+tau^2)/(1+4 th^2 tau^2))]
    d=3 (any temperature): Gamma_3 = c3 {[1 - (1-tau^2)/(1+tau^2)^2]
                                         + 2 th^2 [zeta(2,1+th) - Re zeta(2,1+th+i th tau)]}

The d=3 form is the printed four-zeta expression rewritten with
zeta(2,q) = zeta(2,q+1) + q**-2; the first bracket is the vacuum part and
the second the thermal part, so theta = 0 needs no special branch.

Two qubits, both elements differing (labels 10,10 / 01,01 for Plus and
10,01 / 01,10 for Minus), for any d:
    Gamma^+- = 2 Gamma(tau) +- [Gamma(tau_s+tau) + Gamma(|tau_s-tau|) - 2 Gamma(tau_s)]
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from bath import BathSpec, FLUCTUATIONS
from special import hurwitz_zeta2

logger = logging.getLogger(__name__)


class PairBranch(Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is PairBranch.PLUS else -1


class PairCase(Enum):
    ONE_DIFFERS = "one-differs"
    BOTH_DIFFER = "both-differ"


class Regime(Enum):
    QUIET = "quiet"
    QUANTUM = "quantum"
    THERMAL = "thermal"


@dataclass(frozen=True)
class CoherenceValue:
    """Coherence factor relative to the initial element: magnitude * exp(i phase)."""

    magnitude: float
    phase: float

    @classmethod
    def from_exponent(cls, gamma: float, phase: float = 0.0) -> "CoherenceValue":
        return cls(float(np.exp(-max(gamma, 0.0))), float(phase))

    def conjugate(self) -> "CoherenceValue":
        return CoherenceValue(self.magnitude, -self.phase)

    @property
    def gamma(self) -> float:
        return float(-np.log(self.magnitude)) if self.magnitude > 0 else float("inf")


def _check_closed(d: int) -> None:
    if d not in (1, 3):
        raise ValueError(
            f"closed form unavailable for d={d}; use --method quadrature"
        )


# -- single qubit ------------------------------------------------------------


def gamma1_lowT(c1: float, theta: float, tau):
    """Ohmic single-qubit exponent in the low-temperature approximation."""
    tau = np.abs(np.asarray(tau, dtype=float))
    x = 2.0 * theta * tau
    out = c1 * (x * np.arctan(x) + 0.5 * (np.log1p(tau * tau) - np.log1p(x * x)))
    return float(out) if out.ndim == 0 else out


def gamma1_vacuum(c1: float, tau):
    """Exact Ohmic vacuum exponent c1 ln(1+tau^2) / 2."""
    tau = np.asarray(tau, dtype=float)
    out = 0.5 * c1 * np.log1p(tau * tau)
    return float(out) if out.ndim == 0 else out


def gamma3_vacuum(c3: float, tau):
    tau = np.asarray(tau, dtype=float)
    t2 = tau * tau
    # 1 - (1-t2)/(1+t2)^2 = t2 (3 + t2) / (1+t2)^2, free of cancellation at small tau
    out = c3 * t2 * (3.0 + t2) / (1.0 + t2) ** 2
    return float(out) if out.ndim == 0 else out


def gamma3_thermal(c3: float, theta: float, tau):
    tau = np.abs(np.asarray(tau, dtype=float))
    if theta == 0:
        out = np.zeros_like(tau)
    else:
        q = 1.0 + theta
        shifted = np.real(hurwitz_zeta2(q + 1j * theta * tau))
        out = 2.0 * c3 * theta**2 * (hurwitz_zeta2(q).real - shifted)
    return float(out) if np.ndim(out) == 0 else out


def gamma3_exact(c3: float, theta: float, tau):
    """Super-Ohmic single-qubit exponent, exact at any temperature."""
    if theta < 0:
        raise ValueError(f"Temperature ratio must be >= 0, got theta={theta!r}")
    return gamma3_vacuum(c3, tau) + gamma3_thermal(c3, theta, tau)


def gamma3_printed(c3: float, theta: float, tau):
    """
    The four-zeta form c3 {th^2 [z(th) + z(1+th) - z(th+i th tau) - z(th-i th tau)] + (1-tau^2)/(1+tau^2)^2}.

    Kept for cross-checking; loses digits at small theta.
    """
    if theta <= 0:
        raise ValueError(f"Four-zeta form needs theta > 0, got {theta!r}")
    tau = np.asarray(tau, dtype=float)
    t2 = tau * tau
    q = theta + 1j * theta * tau
    zeta_sum = (
        hurwitz_zeta2(theta).real
        + hurwitz_zeta2(1.0 + theta).real
        - hurwitz_zeta2(q).real
        - hurwitz_zeta2(np.conj(q)).real
    )
    out = c3 * (theta**2 * zeta_sum + (1.0 - t2) / (1.0 + t2) ** 2)
    return float(out) if np.ndim(out) == 0 else out


def gamma_closed(d: int, c: float, theta: float, tau, fluctuations: str = "total"):
    """Single-qubit exponent for d in {1, 3}, optionally only the vacuum or thermal part."""
    _check_closed(d)
    if fluctuations not in FLUCTUATIONS:
        raise ValueError(f"fluctuations must be one of {FLUCTUATIONS}, got {fluctuations!r}")
    if d == 1:
        if fluctuations == "vacuum":
            return gamma1_vacuum(c, tau)
        total = gamma1_lowT(c, theta, tau)
        if fluctuations == "thermal":
            return total - gamma1_vacuum(c, tau)
        return total
    if fluctuations == "vacuum":
        return gamma3_vacuum(c, tau)
    if fluctuations == "thermal":
        return gamma3_thermal(c, theta, tau)
    return gamma3_exact(c, theta, tau)


def gamma_limit(d: int, c: float, theta: float) -> float:
    """tau -> infinity limit of the single-qubit exponent (inf when it grows without bound)."""
    _check_closed(d)
    if d == 1:
        return float("inf")
    return c * (1.0 + 2.0 * theta**2 * hurwitz_zeta2(1.0 + theta).real)


def cos_moment_closed(d: int, c: float, u):
    """int I_d cos(ux)/x dx: c/(1+u^2) for d=1, 2c cos(3 atan u)/(1+u^2)^(3/2) for d=3."""
    _check_closed(d)
    u = np.asarray(u, dtype=float)
    if d == 1:
        out = c / (1.0 + u * u)
    else:
        out = 2.0 * c * np.cos(3.0 * np.arctan(u)) / (1.0 + u * u) ** 1.5
    return float(out) if out.ndim == 0 else out


def sin_moment_closed(d: int, c: float, u):
    """int I_d sin(ux)/x^2 dx: c atan u for d=1, c sin(2 atan u)/(1+u^2) for d=3."""
    _check_closed(d)
    u = np.asarray(u, dtype=float)
    if d == 1:
        out = c * np.arctan(u)
    else:
        out = c * np.sin(2.0 * np.arctan(u)) / (1.0 + u * u)
    return float(out) if out.ndim == 0 else out


def theta_closed(d: int, c: float, tau):
    """
    Collective phase functional.

    d=1: c1 (tau - atan tau); d=3: c3 (2 tau - sin(2 atan tau) / (1+tau^2)).
    """
    tau = np.asarray(tau, dtype=float)
    out = tau * cos_moment_closed(d, c, 0.0) - sin_moment_closed(d, c, tau)
    return float(out) if np.ndim(out) == 0 else out


class ClosedFormPrimitives:
    """Analytic single-frequency integrals, interchangeable with kernels.QuadraturePrimitives."""

    source = "closed-form"

    def __init__(self, bath: BathSpec):
        _check_closed(bath.d)
        self.bath = bath

    def gamma(self, u: float, fluctuations: str = "total") -> float:
        return gamma_closed(self.bath.d, self.bath.c, self.bath.theta, abs(u), fluctuations)

    def cos_moment(self, u: float) -> float:
        return cos_moment_closed(self.bath.d, self.bath.c, u)

    def sin_moment(self, u: float) -> float:
        return sin_moment_closed(self.bath.d, self.bath.c, u)


# -- two qubits, independent coupling ---------------------------------------


def pair_both_differ_exponent(d: int, c: float, theta: float, tau, tau_s: float, branch: PairBranch):
    """Gamma^+- for labels with both qubits off-diagonal."""
    tau = np.abs(np.asarray(tau, dtype=float))
    single = gamma_closed(d, c, theta, tau)
    second = (
        gamma_closed(d, c, theta, tau_s + tau)
        + gamma_closed(d, c, theta, np.abs(tau_s - tau))
        - 2.0 * gamma_closed(d, c, theta, tau_s)
    )
    out = 2.0 * single + branch.sign * second
    out = np.maximum(out, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def pair_one_differs_phase(d: int, c: float, tau, tau_s: float, branch: PairBranch):
    """
    Phase of the labels with one qubit diagonal: +-[tau A(ts) - B(tau+ts)/2 + B(ts-tau)/2].

    Plus carries f' = +1 (00,01 and 11,10), Minus f' = -1 (00,10 and 11,01).
    """
    tau = np.asarray(tau, dtype=float)
    t_plus = tau_s + tau
    t_minus = tau_s - tau
    out = branch.sign * (
        tau * cos_moment_closed(d, c, tau_s)
        - 0.5 * sin_moment_closed(d, c, t_plus)
        + 0.5 * sin_moment_closed(d, c, t_minus)
    )
    return float(out) if np.ndim(out) == 0 else out


def _pair_independent(d, c, theta, tau, tau_s, case: PairCase, branch: PairBranch) -> CoherenceValue:
    if tau < 0 or tau_s < 0:
        raise ValueError(f"Times must be >= 0, got tau={tau!r}, tau_s={tau_s!r}")
    if case is PairCase.ONE_DIFFERS:
        return CoherenceValue.from_exponent(
            gamma_closed(d, c, theta, tau), pair_one_differs_phase(d, c, tau, tau_s, branch)
        )
    return CoherenceValue.from_exponent(
        pair_both_differ_exponent(d, c, theta, tau, tau_s, branch)
    )


def pair_independent_d1(c1, theta, tau, tau_s, case: PairCase, branch: PairBranch) -> CoherenceValue:
    """Ohmic two-qubit coherence under independent coupling."""
    return _pair_independent(1, c1, theta, tau, tau_s, case, branch)


def pair_independent_d3(c3, theta, tau, tau_s, case: PairCase, branch: PairBranch) -> CoherenceValue:
    """Super-Ohmic two-qubit coherence under independent coupling (exact)."""
    return _pair_independent(3, c3, theta, tau, tau_s, case, branch)


def pair_both_differ_d3_printed(c3: float, theta: float, tau, tau_s: float, branch: PairBranch):
    """
    Six-zeta form of the super-Ohmic Gamma^+- for cross-checking.

    2 Gamma_3(tau) +- 2 c3 (-g(ts) + g(t+)/2 + g(t-)/2
        + th^2/2 {2 z(ts) + 2 z*(ts) - z(t+) - z*(t+) - z(t-) - z*(t-)})
    with g(u) = (1-u^2)/(1+u^2)^2 and z(u) = zeta(2, th + i th u).
    """
    if theta <= 0:
        raise ValueError(f"Six-zeta form needs theta > 0, got {theta!r}")
    tau = np.asarray(tau, dtype=float)

    def g(u):
        return (1.0 - u * u) / (1.0 + u * u) ** 2

    def z2(u):
        return 2.0 * np.real(hurwitz_zeta2(theta + 1j * theta * np.asarray(u, dtype=float)))

    t_plus = tau_s + tau
    t_minus = tau_s - tau
    bracket = (
        -g(tau_s)
        + 0.5 * g(t_plus)
        + 0.5 * g(t_minus)
        + 0.5 * theta**2 * (2.0 * z2(tau_s) - z2(t_plus) - z2(t_minus))
    )
    out = 2.0 * gamma3_printed(c3, theta, tau) + branch.sign * 2.0 * c3 * bracket
    return float(out) if np.ndim(out) == 0 else out


def pair_limit(d: int, c: float, theta: float, tau_s: float, case: PairCase, branch: PairBranch) -> float:
    """
    tau -> infinity limit of the two-qubit exponent (inf when it diverges).

    Minus tends to 2 Gamma(ts): the second difference of Gamma vanishes
    because its growth is at most linear. Plus tends to 4 Gamma(inf) - 2 Gamma(ts).
    """
    _check_closed(d)
    if case is PairCase.ONE_DIFFERS:
        return gamma_limit(d, c, theta)
    if branch is PairBranch.MINUS:
        return 2.0 * gamma_closed(d, c, theta, tau_s)
    limit = gamma_limit(d, c, theta)
    if np.isinf(limit):
        return limit
    return 4.0 * limit - 2.0 * gamma_closed(d, c, theta, tau_s)


# -- two qubits, collective coupling ----------------------------------------


def pair_collective(cd: float, d: int, theta: float, tau: float, case: PairCase, branch: PairBranch) -> CoherenceValue:
    """
    Two-qubit coherence under collective coupling.

    One qubit diagonal: exp(-Gamma_d +- i Theta_d). Both differ: Minus is
    decoherence-free, Plus decays as exp(-4 Gamma_d).
    """
    _check_closed(d)
    if tau < 0:
        raise ValueError(f"Time must be >= 0, got tau={tau!r}")
    if case is PairCase.ONE_DIFFERS:
        return CoherenceValue.from_exponent(
            gamma_closed(d, cd, theta, tau), branch.sign * theta_closed(d, cd, tau)
        )
    if branch is PairBranch.MINUS:
        return CoherenceValue(1.0, 0.0)
    return CoherenceValue.from_exponent(4.0 * gamma_closed(d, cd, theta, tau))


def pair_collective_limit(d: int, c: float, theta: float, case: PairCase, branch: PairBranch) -> float:
    _check_closed(d)
    if case is PairCase.BOTH_DIFFER and branch is PairBranch.MINUS:
        return 0.0
    factor = 1.0 if case is PairCase.ONE_DIFFERS else 4.0
    return factor * gamma_limit(d, c, theta)


# -- Ohmic regimes ------------------------------------------------------------


def regime_times(theta: float) -> tuple[float, float]:
    """(tau_c, tau_T): bath memory time and thermal time in cutoff units."""
    if theta < 0:
        raise ValueError(f"Temperature ratio must be >= 0, got theta={theta!r}")
    return 1.0, (float("inf") if theta == 0 else 1.0 / theta)


def classify_regime(theta: float, tau: float) -> Regime:
    tau_c, tau_t = regime_times(theta)
    if tau < tau_c:
        return Regime.QUIET
    if tau < tau_t:
        return Regime.QUANTUM
    return Regime.THERMAL


def regime_asymptote(c1: float, theta: float, tau: float, regime: Regime) -> float:
    """
    Ohmic asymptotes: c1 tau^2/2 (quiet), c1 ln tau (quantum), 2 c1 theta tau (thermal).

    The thermal slope of gamma1_lowT itself is pi c1 theta; see thermal_slope_exact.
    """
    if regime is Regime.QUIET:
        return 0.5 * c1 * tau * tau
    if regime is Regime.QUANTUM:
        return c1 * float(np.log(tau))
    return 2.0 * c1 * theta * tau


def thermal_slope_exact(c1: float, theta: float) -> float:
    """Large-tau slope of gamma1_lowT."""
    return float(np.pi * c1 * theta)
