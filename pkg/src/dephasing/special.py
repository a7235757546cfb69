"""
Hurwitz zeta function at s = 2 for complex argument.

zeta(2, q) = sum_{n>=0} (n + q)**-2 for Re(q) > 0, evaluated as a short
direct sum followed by the Euler-Maclaurin tail at w = q + N:

    1/w + 1/(2 w**2) + sum_k B_2k / w**(2k+1)
"""

import numpy as np

# |q + N| at which the asymptotic tail takes over
SHIFT_RADIUS = 10.0

# B_2, B_4, ..., B_20
_BERNOULLI = np.array(
    [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ]
)

UNDERFLOW = 1e-300


def _tail(w: np.ndarray) -> np.ndarray:
    inv = 1.0 / w
    inv2 = inv * inv
    total = inv + 0.5 * inv2
    power = inv * inv2
    for b in _BERNOULLI:
        total = total + b * power
        power = power * inv2
    return total


def hurwitz_zeta2(q):
    """
    Evaluate zeta(2, q) for complex q with Re(q) > 0.

    Accepts a scalar or an array; returns a Python complex for scalar input.

    Raises:
        ValueError: If any Re(q) <= 0 or q is not finite.
    """
    qs = np.asarray(q, dtype=complex)
    if not np.all(np.isfinite(qs)):
        raise ValueError("Hurwitz zeta argument must be finite")
    if np.any(qs.real <= 0):
        bad = qs[qs.real <= 0].ravel()[0]
        raise ValueError(f"zeta(2, q) requires Re(q) > 0, got q={bad!r}")

    flat = qs.ravel()
    shift = np.where(np.abs(flat) >= SHIFT_RADIUS, 0, int(np.ceil(SHIFT_RADIUS)))
    n = np.arange(int(np.ceil(SHIFT_RADIUS)))
    terms = 1.0 / (flat[:, None] + n[None, :]) ** 2
    terms = np.where(n[None, :] < shift[:, None], terms, 0.0)
    result = terms.sum(axis=1) + _tail(flat + shift)
    result = np.where(np.abs(result) < UNDERFLOW, 0.0, result).reshape(qs.shape)

    if np.ndim(q) == 0:
        return complex(result)
    return result
