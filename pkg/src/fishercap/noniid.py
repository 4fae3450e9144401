"""Fisher information rate for stationary correlated Gaussian noise.

For y_i = theta + z_i with zero-mean stationary Gaussian noise of
autocovariance gamma(k), the n-output Fisher information is
(1/n) 1^T Sigma_n^{-1} 1 with Sigma_n = [gamma(j - k)]; as n grows it
converges to 1 / sum_k gamma(k), the reciprocal of the spectral density
at frequency zero (times 2 pi).  Because the limit is constant in
theta, the tilted prior is untouched by the correlation; only the
capacity offset moves.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as _la

from .channels import ChannelSpec, ParameterSpace
from .errors import DomainError, ValidationError


@dataclass(frozen=True, eq=False)
class Autocovariance:
    """Symmetric summable autocovariance gamma(k); series_sum = sum_k gamma(k)."""

    gamma: callable
    series_sum: float | None = None

    def __post_init__(self):
        if self.gamma(0) <= 0:
            raise ValidationError("Autocovariance: gamma(0) must be positive")


def white_noise_autocovariance(variance=1.0):
    v = float(variance)
    if not v > 0:
        raise DomainError("white_noise_autocovariance: variance must be positive")
    return Autocovariance(gamma=lambda k: v if k == 0 else 0.0, series_sum=v)


def ar1_autocovariance(rho, variance=1.0):
    """Geometric autocovariance gamma(k) = variance * rho^|k|."""
    rho = float(rho)
    v = float(variance)
    if not -1.0 < rho < 1.0:
        raise DomainError("ar1_autocovariance: need |rho| < 1")
    if not v > 0:
        raise DomainError("ar1_autocovariance: variance must be positive")
    return Autocovariance(
        gamma=lambda k: v * rho ** abs(k),
        series_sum=v * (1.0 + rho) / (1.0 - rho),
    )


def fisher_rate_finite(acov, n):
    """(1/n) 1^T Sigma_n^{-1} 1 via a symmetric positive-definite solve."""
    n = int(n)
    if n < 1:
        raise DomainError("fisher_rate_finite: n must be >= 1")
    col = np.array([acov.gamma(k) for k in range(n)], dtype=float)
    sigma = _la.toeplitz(col)
    try:
        cf = _la.cho_factor(sigma, overwrite_a=True, check_finite=False)
    except _la.LinAlgError as e:
        raise DomainError(f"fisher_rate_finite: Toeplitz matrix not PD at n={n}") from e
    x = _la.cho_solve(cf, np.ones(n), check_finite=False)
    return float(x.sum()) / n


def fisher_rate_limit(acov, max_terms=10 ** 6):
    """Limit 1 / sum_k gamma(k), summed numerically when no closed form is known."""
    if acov.series_sum is not None:
        total = float(acov.series_sum)
    else:
        total = float(acov.gamma(0))
        converged = 0
        for k in range(1, max_terms + 1):
            term = 2.0 * float(acov.gamma(k))
            total += term
            if abs(term) < 1e-15 * max(abs(total), 1.0):
                converged += 1
                if converged >= 8:
                    break
            else:
                converged = 0
        else:
            raise DomainError("fisher_rate_limit: autocovariance does not appear summable")
    if not total > 0:
        raise DomainError("fisher_rate_limit: sum of gamma must be positive")
    return 1.0 / total


def correlated_awgn_channel(peak, acov):
    """Effective per-antenna channel once the noise correlation is folded in.

    Fisher information is the (theta-independent) rate limit, so the
    tilted prior coincides with the white-noise one while the capacity
    offset tracks the correlation.
    """
    A = float(peak)
    if not A > 0:
        raise ValidationError("correlated_awgn_channel: peak must be positive")
    rate = fisher_rate_limit(acov)
    ps = ParameterSpace.interval(-A, A)

    def const(theta):
        t = np.asarray(theta, dtype=float)
        out = np.full_like(t, rate)
        return float(out) if np.ndim(theta) == 0 else out

    return ChannelSpec(
        kind="correlated_awgn",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=const,
        sqrt_det_fisher=lambda t: np.sqrt(const(t)),
        output_kind="continuous-scalar",
        params={"kind": "correlated_awgn", "A": A},
    )


def autocovariance_from_json(record):
    """Parse {"kind": "white"|"ar1", ...} into an Autocovariance."""
    import json

    if isinstance(record, (str, bytes)):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as e:
            raise ValidationError(f"autocovariance_from_json: invalid JSON ({e})") from e
    kind = record.get("kind")
    if kind == "white":
        return white_noise_autocovariance(record.get("variance", 1.0))
    if kind == "ar1":
        return ar1_autocovariance(record["rho"], record.get("variance", 1.0))
    raise ValidationError(f"autocovariance_from_json: unknown kind {kind!r}")
