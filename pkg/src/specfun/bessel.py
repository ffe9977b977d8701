"""Bessel and Hankel functions of order 0 and 1 for Rough Surface Imaging.

Real arguments only. Every function accepts scalars or numpy arrays.

hankel01 uses the ascending power series (with the logarithmic companion
series for Y0 and Y1) up to SERIES_CUTOFF and the Hankel asymptotic expansion
above it. bessel_j keeps its relative accuracy near the zeros of J0 and J1:
the series only runs up to J_SERIES_MAX, Miller's backward recurrence covers
the range up to J_RECURRENCE_MAX, and the asymptotic expansion takes over
beyond. The asymptotic phase is built from exp(i t) so that large arguments
lose no digits to the subtraction t - pi/4.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

# |t| at or below this uses the power series in hankel01
SERIES_CUTOFF = 12.0

J_SERIES_MAX = 1.0
J_RECURRENCE_MAX = 25.0

SERIES_TERMS = 40
ASYMPTOTIC_MIN_TERMS = 8
ASYMPTOTIC_MAX_TERMS = 30

# orders above ceil(t) where the backward recurrence starts
RECURRENCE_HEADROOM = 40
_RESCALE_ABOVE = 1e250


def _check_order(n: int) -> None:
    if n not in (0, 1):
        raise ValueError(f"Only orders 0 and 1 are supported, got {n}")


def _unwrap(values: np.ndarray, scalar: bool):
    if scalar:
        return values.item()
    return values


def _series_j(n: int, t: np.ndarray) -> np.ndarray:
    """Ascending series for J_n, n in {0, 1}."""
    q = 0.25 * t * t
    term = np.ones_like(t) if n == 0 else 0.5 * t
    total = term.copy()
    for m in range(1, SERIES_TERMS):
        term = term * (-q) / (m * (m + n))
        total += term
    return total


def _series_y(n: int, t: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Logarithmic series for Y_n on t > 0, given J_n(t)."""
    q = 0.25 * t * t
    log_half = np.log(0.5 * t)
    if n == 0:
        # (2/pi) sum_{m>=1} (-1)^(m+1) H_m q^m / (m!)^2
        power = np.ones_like(t)
        harmonic = 0.0
        total = np.zeros_like(t)
        for m in range(1, SERIES_TERMS):
            power = power * (-q) / (m * m)
            harmonic += 1.0 / m
            total -= harmonic * power
        return (2.0 / np.pi) * ((log_half + EULER_GAMMA) * j + total)

    # -(1/pi) sum_{m>=0} (-1)^m (psi(m+1) + psi(m+2)) (t/2)^(2m+1) / (m! (m+1)!)
    power = 0.5 * t
    harmonic = 0.0
    total = (1.0 - 2.0 * EULER_GAMMA) * power
    for m in range(1, SERIES_TERMS):
        power = power * (-q) / (m * (m + 1))
        harmonic += 1.0 / m
        psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (m + 1)
        total += psi_sum * power
    return (2.0 / np.pi) * log_half * j - 2.0 / (np.pi * t) - total / np.pi


def _recurrence_j01(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """J0 and J1 on t > 0 by Miller's backward recurrence.

    The unnormalised sequence is scaled with J0 + 2 (J2 + J4 + ...) = 1.
    """
    top = 2 * ((int(np.ceil(t.max())) + RECURRENCE_HEADROOM) // 2)
    upper = np.zeros_like(t)
    current = np.full_like(t, 1e-30)
    norm = np.zeros_like(t)
    for n in range(top, 0, -1):
        upper, current = current, (2.0 * n / t) * current - upper
        if n > 1 and (n - 1) % 2 == 0:
            norm += 2.0 * current
        big = np.abs(current) > _RESCALE_ABOVE
        if big.any():
            scale = np.where(big, 1.0 / _RESCALE_ABOVE, 1.0)
            upper *= scale
            current *= scale
            norm *= scale
    norm += current
    return current / norm, upper / norm


def _asymptotic_sum(n: int, t: np.ndarray) -> np.ndarray:
    """Correction series P + iQ of the Hankel asymptotic expansion.

    Terms are added while they keep shrinking, with at least
    ASYMPTOTIC_MIN_TERMS corrections.
    """
    mu = 4.0 * n * n
    term = np.ones(t.shape, dtype=complex)
    total = term.copy()
    previous = np.abs(term)
    active = np.ones(t.shape, dtype=bool)
    for m in range(1, ASYMPTOTIC_MAX_TERMS + 1):
        term = term * 1j * (mu - (2 * m - 1) ** 2) / (8.0 * m * t)
        size = np.abs(term)
        if m > ASYMPTOTIC_MIN_TERMS:
            active &= size < previous
        total += np.where(active, term, 0.0)
        previous = size
        if not active.any():
            break
    return total


def _asymptotic_hankel(n: int, t: np.ndarray) -> np.ndarray:
    """Hankel asymptotic expansion of H_n^(1)(t) for large positive t."""
    phase = np.exp(1j * t) * np.exp(-1j * (0.5 * n + 0.25) * np.pi)
    return np.sqrt(2.0 / (np.pi * t)) * phase * _asymptotic_sum(n, t)


def hankel01(t):
    """Evaluate H_0^(1)(t) and H_1^(1)(t) together.

    Args:
        t: Positive real argument(s).

    Returns:
        Tuple (H0, H1) with the shape of ``t``.

    Raises:
        ValueError: If any argument is not strictly positive.
    """
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ValueError("Hankel functions need t > 0")

    h0 = np.empty(t.shape, dtype=complex)
    h1 = np.empty(t.shape, dtype=complex)

    small = t <= SERIES_CUTOFF
    if small.any():
        ts = t[small]
        j0 = _series_j(0, ts)
        j1 = _series_j(1, ts)
        h0[small] = j0 + 1j * _series_y(0, ts, j0)
        h1[small] = j1 + 1j * _series_y(1, ts, j1)
    large = ~small
    if large.any():
        tl = t[large]
        h0[large] = _asymptotic_hankel(0, tl)
        h1[large] = _asymptotic_hankel(1, tl)

    return _unwrap(h0, scalar), _unwrap(h1, scalar)


def hankel1(n: int, t):
    """Hankel function of the first kind H_n^(1)(t) = J_n(t) + i Y_n(t).

    Raises:
        ValueError: For an unsupported order or t <= 0.
    """
    _check_order(n)
    h0, h1 = hankel01(t)
    return h0 if n == 0 else h1


def bessel_j(n: int, t):
    """Bessel function J_n(t) for any finite real t."""
    _check_order(n)
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("bessel_j needs finite arguments")

    a = np.abs(t)
    out = np.empty(t.shape, dtype=float)
    small = a <= J_SERIES_MAX
    large = a > J_RECURRENCE_MAX
    middle = ~small & ~large
    if small.any():
        out[small] = _series_j(n, a[small])
    if middle.any():
        out[middle] = _recurrence_j01(a[middle])[n]
    if large.any():
        out[large] = _asymptotic_hankel(n, a[large]).real
    if n == 1:
        out = np.where(t < 0, -out, out)
    return _unwrap(out, scalar)


def bessel_y(n: int, t):
    """Bessel function of the second kind Y_n(t), t > 0."""
    _check_order(n)
    return np.imag(hankel1(n, t))
