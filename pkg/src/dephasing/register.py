"""
L-qubit register coherences.

A coherence is selected by a CoherenceLabel: the bra/ket qubit values
(i_n, j_n), each +1/2 (bit 1) or -1/2 (bit 0). Elements are evaluated one
at a time relative to their initial value, so no 2^L x 2^L matrix is ever
built.

Evaluation paths:
    - independent coupling: kernels.assemble over pairwise transit times
    - collective coupling: label prefactors times the single-qubit functionals
    - discrete oracle: the exact finite-mode sum over a ModeSet
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from bath import BathSpec, fluctuation_weight, spectral_density
from closedform import ClosedFormPrimitives, CoherenceValue
from kernels import (
    DEFAULT_CONFIG,
    DecoherenceFunctions,
    QuadratureConfig,
    QuadraturePrimitives,
    assemble,
    assemble_collective,
    kernel_c,
    kernel_s,
)

logger = logging.getLogger(__name__)

METHODS = ("closed", "quadrature")

_BIT_VALUES = {"1": 0.5, "0": -0.5}


@dataclass(frozen=True)
class CoherenceLabel:
    """Ordered (i_n, j_n) pairs, one per qubit, each entry +1/2 or -1/2."""

    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValueError("Coherence label needs at least one qubit")
        for n, pair in enumerate(self.pairs):
            if len(pair) != 2 or any(v not in (0.5, -0.5) for v in pair):
                raise ValueError(f"Qubit {n} entry must be a pair of +-1/2, got {pair!r}")

    @classmethod
    def from_bits(cls, i_bits: str, j_bits: str) -> "CoherenceLabel":
        """
        Build from bra and ket bit strings, first character = qubit 1.

        from_bits("111", "000") is the fastest-decaying three-qubit element.
        """
        i_bits, j_bits = i_bits.strip(), j_bits.strip()
        if len(i_bits) != len(j_bits):
            raise ValueError(f"Bit strings differ in length: {i_bits!r} vs {j_bits!r}")
        try:
            pairs = tuple((_BIT_VALUES[a], _BIT_VALUES[b]) for a, b in zip(i_bits, j_bits))
        except KeyError as e:
            raise ValueError(f"Bits must be 0 or 1, got {i_bits!r}, {j_bits!r}") from e
        return cls(pairs)

    @classmethod
    def parse(cls, text: str) -> "CoherenceLabel":
        """Parse "ibits,jbits" (e.g. "10,01")."""
        parts = [p.strip() for p in text.replace(" ", ",").split(",") if p.strip()]
        if len(parts) != 2:
            raise ValueError(f"Label must look like 'ibits,jbits', got {text!r}")
        return cls.from_bits(parts[0], parts[1])

    @classmethod
    def from_element(cls, text: str) -> "CoherenceLabel":
        """
        Parse per-qubit element notation "i_a j_a, i_b j_b, ..." (e.g. "10,10").

        This is the subscript notation of two-qubit matrix elements: "10,10"
        has qubit a with (i, j) = (1, 0) and qubit b with (1, 0).
        """
        groups = [g.strip() for g in text.split(",") if g.strip()]
        if not groups or any(len(g) != 2 for g in groups):
            raise ValueError(f"Element must look like '10,01', got {text!r}")
        return cls.from_bits("".join(g[0] for g in groups), "".join(g[1] for g in groups))

    @classmethod
    def fastest(cls, size: int) -> "CoherenceLabel":
        """The (0...0, 1...1) element, which decays fastest."""
        if size < 1:
            raise ValueError(f"Register size must be >= 1, got {size}")
        return cls.from_bits("0" * size, "1" * size)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def i(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs])

    @property
    def j(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs])

    @property
    def is_diagonal(self) -> bool:
        return all(a == b for a, b in self.pairs)

    def swapped(self) -> "CoherenceLabel":
        """Hermitian partner: every (i, j) becomes (j, i)."""
        return CoherenceLabel(tuple((b, a) for a, b in self.pairs))

    def bits(self) -> tuple[str, str]:
        to_bit = {0.5: "1", -0.5: "0"}
        return (
            "".join(to_bit[a] for a, _ in self.pairs),
            "".join(to_bit[b] for _, b in self.pairs),
        )

    def __str__(self) -> str:
        return ",".join(self.bits())


@dataclass(frozen=True)
class RegisterGeometry:
    """
    Pairwise transit times tau_s(m, n) = omega_c t_s for the register qubits.

    Qubit order is the propagation order of the bath modes; it fixes the sign
    of the Lambda phase.
    """

    transit: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.transit, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
            raise ValueError(f"Transit matrix must be square, got shape {t.shape}")
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise ValueError("Transit times must be finite and >= 0")
        if not np.allclose(t, t.T, rtol=0, atol=1e-12 * max(1.0, float(t.max()))):
            raise ValueError("Transit matrix must be symmetric")
        if np.any(np.diag(t) != 0):
            raise ValueError("Transit matrix must have a zero diagonal")
        t.setflags(write=False)
        object.__setattr__(self, "transit", t)

    @classmethod
    def from_positions(cls, positions) -> "RegisterGeometry":
        """Collinear qubits at the given coordinates (cutoff units), listed in propagation order."""
        p = np.asarray(positions, dtype=float).ravel()
        if p.size < 1:
            raise ValueError("Need at least one qubit position")
        if np.any(np.diff(p) < 0):
            raise ValueError(f"Positions must be listed in propagation order (ascending), got {p.tolist()}")
        return cls(np.abs(p[None, :] - p[:, None]))

    @classmethod
    def uniform(cls, size: int, tau_s: float) -> "RegisterGeometry":
        """Evenly spaced chain with nearest-neighbour transit time tau_s."""
        if size < 1:
            raise ValueError(f"Register size must be >= 1, got {size}")
        return cls.from_positions(tau_s * np.arange(size))

    @classmethod
    def collective(cls, size: int) -> "RegisterGeometry":
        return cls(np.zeros((size, size)))

    @property
    def size(self) -> int:
        return self.transit.shape[0]

    def positions(self) -> np.ndarray:
        """
        Collinear coordinates relative to qubit 1.

        Raises:
            ValueError: If the transit times are not those of an ordered chain.
        """
        p = self.transit[0].copy()
        rebuilt = np.abs(p[None, :] - p[:, None])
        if np.any(np.diff(p) < 0) or not np.allclose(rebuilt, self.transit, rtol=1e-12, atol=1e-12):
            raise ValueError("Geometry is not an ordered collinear chain; pass positions explicitly")
        return p


@dataclass(frozen=True)
class ModeSet:
    """
    Finite set of bath modes.

    Attributes:
        x: Mode frequencies (cutoff units), shape (K,).
        weights: Squared couplings |g_k|^2, shape (K,).
        phases: k.r_n per mode and qubit, shape (K, L).
    """

    x: np.ndarray
    weights: np.ndarray
    phases: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        ph = np.asarray(self.phases, dtype=float)
        if ph.ndim == 1:
            ph = ph[:, None]
        if not (len(x) == len(w) == ph.shape[0]):
            raise ValueError(
                f"Mode arrays disagree in length: x={len(x)}, weights={len(w)}, phases={ph.shape[0]}"
            )
        if np.any(x <= 0):
            raise ValueError("Mode frequencies must be > 0")
        if np.any(w < 0):
            raise ValueError("Mode weights must be >= 0")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "phases", ph)

    @property
    def size(self) -> int:
        return len(self.x)

    @property
    def qubits(self) -> int:
        return self.phases.shape[1]


def default_upper(bath: BathSpec) -> float:
    """Highest sampled frequency when none is given, the quadrature cutoff."""
    return DEFAULT_CONFIG.cutoff_multiplier * max(1.0, bath.theta)


def sample_modes(bath: BathSpec, positions, n_modes: int, upper: float | None = None) -> ModeSet:
    """
    Midpoint Riemann sampling of I_d on [0, upper].

    Mode k sits at x_k = (k - 1/2) dx with weight I_d(x_k) dx and phase
    x_k p_n at qubit n, so that sums over modes approach the continuum integrals.
    """
    if n_modes < 0:
        raise ValueError(f"Mode count must be >= 0, got {n_modes}")
    p = np.atleast_1d(np.asarray(positions, dtype=float))
    if upper is None:
        upper = default_upper(bath)
    if n_modes == 0:
        return ModeSet(np.empty(0), np.empty(0), np.empty((0, p.size)))
    dx = upper / n_modes
    x = (np.arange(n_modes) + 0.5) * dx
    weights = spectral_density(bath, x) * dx
    return ModeSet(x, weights, x[:, None] * p[None, :])


def discrete_functions(modes: ModeSet, label: CoherenceLabel, theta: float, tau: float) -> DecoherenceFunctions:
    """
    Exact finite-mode exponents.

    Gamma  = sum_k w_k c(x_k,tau) coth(x_k/2th) sum_mn (i-j)_m (i-j)_n cos(dphi_mn)
    Theta  = sum_k w_k s(x_k,tau) sum_mn (i_m i_n - j_m j_n) cos(dphi_mn)
    Lambda = 2 sum_k w_k c(x_k,tau) sum_mn i_m j_n sin(dphi_mn)
    with dphi_mn = phase_m - phase_n.
    """
    if modes.qubits != label.size:
        raise ValueError(f"Modes carry {modes.qubits} qubit phases, label has {label.size}")
    if modes.size == 0:
        logger.warning("Empty mode set; coherence stays at its initial value")
        return DecoherenceFunctions(0.0, 0.0, 0.0)
    if tau == 0:
        return DecoherenceFunctions(0.0, 0.0, 0.0)

    i, j = label.i, label.j
    delta = i - j
    c = kernel_c(modes.x, tau)
    s = kernel_s(modes.x, tau)
    coth = fluctuation_weight(theta, modes.x)
    dphi = modes.phases[:, :, None] - modes.phases[:, None, :]
    cos_d, sin_d = np.cos(dphi), np.sin(dphi)

    damping = np.einsum("m,kmn,n->k", delta, cos_d, delta)
    phase_s = np.einsum("m,kmn,n->k", i, cos_d, i) - np.einsum("m,kmn,n->k", j, cos_d, j)
    phase_c = np.einsum("m,kmn,n->k", i, sin_d, j)

    w = modes.weights
    gamma = float(np.sum(w * c * coth * damping))
    theta_phase = float(np.sum(w * s * phase_s))
    lambda_phase = float(2.0 * np.sum(w * c * phase_c))
    return DecoherenceFunctions(max(gamma, 0.0), theta_phase, lambda_phase)


def coherence_discrete(modes: ModeSet, label: CoherenceLabel, theta: float, tau: float) -> CoherenceValue:
    """Coherence factor from the finite-mode sum: exp(-Gamma + i (Theta - Lambda))."""
    f = discrete_functions(modes, label, theta, tau)
    return CoherenceValue.from_exponent(f.gamma, f.aleph)


def _primitives(bath: BathSpec, method: str, config: QuadratureConfig):
    if method == "closed":
        return ClosedFormPrimitives(bath)
    if method == "quadrature":
        return QuadraturePrimitives(bath, config)
    raise ValueError(f"method must be one of {METHODS}, got {method!r}")


def independent_functions(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    tau: float,
    method: str = "quadrature",
    config: QuadratureConfig = DEFAULT_CONFIG,
    fluctuations: str = "total",
) -> DecoherenceFunctions:
    return assemble(_primitives(bath, method, config), geometry, label, tau, fluctuations)


def collective_functions(
    bath: BathSpec,
    label: CoherenceLabel,
    tau: float,
    method: str = "quadrature",
    config: QuadratureConfig = DEFAULT_CONFIG,
    fluctuations: str = "total",
) -> DecoherenceFunctions:
    return assemble_collective(_primitives(bath, method, config), label, tau, fluctuations)


def coherence_independent(
    bath: BathSpec,
    geometry: RegisterGeometry,
    label: CoherenceLabel,
    tau: float,
    method: str = "quadrature",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> CoherenceValue:
    """Independent coupling: exp(-Gamma_d) exp(i (Theta_d - Lambda_d))."""
    f = independent_functions(bath, geometry, label, tau, method, config)
    return CoherenceValue.from_exponent(f.gamma, f.aleph)


def coherence_collective(
    bath: BathSpec,
    label: CoherenceLabel,
    tau: float,
    method: str = "quadrature",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> CoherenceValue:
    """Collective coupling: exp(-Gamma_d [sum(i-j)]^2) exp(i Theta_d [(sum i)^2 - (sum j)^2])."""
    f = collective_functions(bath, label, tau, method, config)
    return CoherenceValue.from_exponent(f.gamma, f.aleph)


@dataclass(frozen=True)
class DfsClass:
    dfs: bool
    damping_weight: float
    phase_weight: float


def dfs_classify(label: CoherenceLabel) -> DfsClass:
    """Collective-coupling prefactors; both zero means the element is decoherence-free."""
    damping = float(np.sum(label.i - label.j) ** 2)
    phase = float(np.sum(label.i) ** 2 - np.sum(label.j) ** 2)
    return DfsClass(damping == 0 and phase == 0, damping, phase)


def f_of_L(size: int, transit, x: float, label: CoherenceLabel | None = None) -> float:
    """
    Error-scaling factor sum_m (i-j)_m^2 + 2 sum_{m<n} (i-j)_m (i-j)_n cos(x tau_s^mn).

    Defaults to the fastest-decaying element, for which it is
    L + 2 sum_{m<n} cos(x tau_s^mn).
    """
    if size < 1:
        raise ValueError(f"Register size must be >= 1, got {size}")
    t = transit.transit if isinstance(transit, RegisterGeometry) else np.asarray(transit, dtype=float)
    if t.shape != (size, size):
        raise ValueError(f"Transit matrix shape {t.shape} does not match L={size}")
    label = label or CoherenceLabel.fastest(size)
    delta = label.i - label.j
    upper = np.triu(np.outer(delta, delta) * np.cos(x * t), k=1)
    return float(np.sum(delta**2) + 2.0 * upper.sum())


def f_of_L_collective(size: int) -> float:
    if size < 1:
        raise ValueError(f"Register size must be >= 1, got {size}")
    return float(size * size)


def oracle_convergence(
    bath: BathSpec,
    positions,
    label: CoherenceLabel,
    tau: float,
    counts=(1_000, 10_000, 100_000),
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> dict:
    """
    Compare the discrete oracle against quadrature for increasing mode counts.

    Returns:
        Dict with "counts", "errors" (magnitude differences) and "order", the
        fitted slope of log(error) against log(1/N).
    """
    geometry = RegisterGeometry.from_positions(positions)
    reference = coherence_independent(bath, geometry, label, tau, "quadrature", config)
    errors = []
    for n in counts:
        modes = sample_modes(bath, positions, n, config.cutoff_multiplier * max(1.0, bath.theta))
        value = coherence_discrete(modes, label, bath.theta, tau)
        errors.append(abs(value.magnitude - reference.magnitude))
    errors = np.asarray(errors)
    order = float("nan")
    positive = errors > 0
    if positive.sum() >= 2:
        slope, _ = np.polyfit(np.log(1.0 / np.asarray(counts, dtype=float)[positive]), np.log(errors[positive]), 1)
        order = float(slope)
    return {"counts": list(counts), "errors": errors.tolist(), "order": order, "reference": reference.magnitude}
