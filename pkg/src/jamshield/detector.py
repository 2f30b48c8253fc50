"""Energy-detector math: Gaussian tail and noncentral chi-square survival.

The jammer's detection statistic is noncentral chi-square with ``2N`` degrees
of freedom.  Its survival function is evaluated as a Poisson mixture of
central chi-square tails (the generalized Marcum Q-function
``Q_N(sqrt(lam), sqrt(x))``), summed around the Poisson mode with an explicit
geometric bound on the discarded mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc

from jamshield.errors import DomainError

# Bound on the discarded Poisson mass (well inside the 1e-10 accuracy target).
SERIES_TOL = 1e-13
# Terms below this fraction of the modal weight are not worth summing.
TERM_RTOL = 1e-14


@dataclass(frozen=True)
class DetectorParams:
    """Jammer energy-detector settings.

    Attributes:
        num_samples: Samples integrated per decision (``N``).
        noise_power: Noise power at the detector (``sigma_J^2``), linear.
        threshold: Sensing threshold ``tau``, linear power.
    """

    num_samples: int = 1
    noise_power: float = 0.0
    threshold: float = 0.2

    def __post_init__(self):
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise DomainError(f"num_samples must be a positive integer, got {self.num_samples}")
        if not self.noise_power >= 0:
            raise DomainError(f"noise_power must be >= 0, got {self.noise_power}")
        if not self.threshold > 0:
            raise DomainError(f"threshold must be > 0, got {self.threshold}")


def gaussian_q(x: float) -> float:
    """Upper tail probability of the standard normal distribution."""
    if not math.isfinite(x):
        raise DomainError(f"gaussian_q needs a finite argument, got {x!r}")
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _poisson_window(mean: float, width: int):
    """Poisson(mean) weights on ``[lo, hi]`` around the mode, relative to the modal weight.

    Built from the ratio recurrence ``w_k / w_{k-1} = mean / k``, which avoids
    the cancellation of evaluating ``k log(mean) - mean - log k!`` directly.
    """
    mode = int(math.floor(mean))
    lo, hi = max(0, mode - width), mode + width
    up = np.cumprod(mean / np.arange(mode + 1, hi + 1, dtype=float))
    down = np.cumprod(np.arange(mode, lo, -1, dtype=float) / mean)[::-1]
    rel = np.concatenate([down, [1.0], up])
    return lo, hi, rel


def _discarded_mass(lo: int, hi: int, mean: float, rel: np.ndarray) -> float:
    """Upper bound on the Poisson mass outside ``[lo, hi]`` as a fraction of the window mass."""
    below = 0.0
    if lo > 0:
        # w_{j-1}/w_j = j/mean <= lo/mean for every j <= lo
        ratio = lo / mean
        below = math.inf if ratio >= 1.0 else rel[0] * ratio / (1.0 - ratio)
    ratio = mean / (hi + 2.0)
    above = math.inf if ratio >= 1.0 else rel[-1] * (mean / (hi + 1.0)) / (1.0 - ratio)
    return (below + above) / rel.sum()


def noncentral_chi2_sf(x: float, dof: int, lam: float) -> float:
    """Survival function ``Pr(chi2_dof(lam) > x)`` for even ``dof``.

    Args:
        x: Evaluation point, ``x >= 0``.
        dof: Degrees of freedom ``2N`` with ``N >= 1``.
        lam: Noncentrality, ``lam >= 0``.

    Returns:
        The survival probability, accurate to about ``1e-10`` absolute.

    Raises:
        DomainError: On negative or non-finite arguments or odd ``dof``.
    """
    if not (math.isfinite(x) and math.isfinite(lam)):
        raise DomainError(f"non-finite argument: x={x!r}, lam={lam!r}")
    if x < 0 or lam < 0:
        raise DomainError(f"x and lam must be >= 0, got x={x}, lam={lam}")
    if int(dof) != dof or dof < 2 or dof % 2:
        raise DomainError(f"dof must be an even positive integer, got {dof}")
    if x == 0:
        return 1.0
    n = dof // 2
    half_x = 0.5 * x
    if lam == 0:
        return float(gammaincc(n, half_x))

    mean = 0.5 * lam
    width = int(math.ceil(12.0 * math.sqrt(mean) + 40.0))
    while True:
        lo, hi, rel = _poisson_window(mean, width)
        if _discarded_mass(lo, hi, mean, rel) <= SERIES_TOL:
            break
        width *= 2

    # Normalizing over the window moves at most SERIES_TOL of mass.
    keep = rel >= TERM_RTOL
    k = np.arange(lo, hi + 1, dtype=float)[keep]
    weights = rel[keep] / rel.sum()
    value = float(np.dot(weights, gammaincc(n + k, half_x)))
    return min(1.0, max(0.0, value))


@lru_cache(maxsize=65536)
def _detection_cached(p_t: float, h_tj: float, det: DetectorParams) -> float:
    received = p_t * h_tj
    if det.noise_power == 0:
        if received > det.threshold:
            return 1.0
        if received < det.threshold:
            return 0.0
        return 0.5
    n = det.num_samples
    return noncentral_chi2_sf(
        det.threshold / det.noise_power, 2 * n, n * received / det.noise_power
    )


def detection_probability(p_t: float, h_tj: float, det: DetectorParams) -> float:
    """Probability that the jammer's energy detector fires on this slot.

    With ``det.noise_power == 0`` the detector is deterministic: it fires when
    ``p_t * h_tj`` exceeds the threshold, stays silent below it, and flips a
    fair coin on exact equality (compared on the represented floats).
    """
    if p_t < 0 or h_tj < 0:
        raise DomainError(f"p_t and h_tj must be >= 0, got p_t={p_t}, h_tj={h_tj}")
    return _detection_cached(float(p_t), float(h_tj), det)
