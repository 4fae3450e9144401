"""Tilted Jeffreys machinery: priors, tilt solving, asymptotic capacity.

The central object is the tilted weight 2^(-lambda c(theta)) sqrt(det
J(theta)) over the parameter space.  Its integral (times 2^(lambda P))
is the Jeffreys factor JF(lambda); normalized it is the tilted Jeffreys
prior; the tilt lambda* is the smallest lambda whose prior meets the
average-power budget, found by bisection because the tilted mean cost
M(lambda) is strictly decreasing.

The large-array capacity is then

    C(P) = (d/2) log2(n_r / (2 pi e)) + log2 JF(lambda*),

up to a term that vanishes as the number of antennas n_r grows; that
vanishing term is not modeled here.

For interval parameter spaces all integrals run over theta directly;
for isotropic ball spaces they run over the radius with the surface
measure of the (d-1)-sphere folded in, and densities returned by
``tilted_prior`` are the radial marginals.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DomainError, PositivityError, UnboundedTiltError
from .quad import QuadRule, integrate_interval
from .specfun import log_gamma

LN2 = math.log(2.0)

_PRIOR_RULE = QuadRule(abs_tol=1e-14, rel_tol=1e-12)
_CDF_TOL = 1e-12


def _log_sphere_surface(d):
    # Surface measure of the unit (d-1)-sphere: 2 pi^(d/2) / Gamma(d/2).
    return math.log(2.0) + 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d)


def _profile(channel):
    """(lo, hi, weight) with weight(theta_array, lam) the unnormalized
    tilted Jeffreys weight in the 1-D working coordinate."""
    ps = channel.param_space
    lo, hi = ps.profile_bounds
    if ps.shape == "interval":
        def weight(t, lam):
            t = np.asarray(t, dtype=float)
            return np.exp2(-lam * channel.cost(t)) * channel.sqrt_det_fisher(t)
    elif ps.isotropic:
        surf = math.exp(_log_sphere_surface(ps.dim))
        expo = ps.dim - 1

        def weight(t, lam):
            t = np.asarray(t, dtype=float)
            return surf * np.exp2(-lam * channel.cost(t)) * channel.sqrt_det_fisher(t) * t ** expo
    else:
        raise DomainError("jeffreys: multi-dimensional non-isotropic spaces are unsupported")
    return lo, hi, weight


def _check_lambda(lam):
    lam = float(lam)
    if not (np.isfinite(lam) and lam >= 0):
        raise DomainError("tilt lambda must be finite and >= 0")
    return lam


def jeffreys_factor(channel, lam, P=0.0):
    """JF(lambda) = integral over Theta of 2^(-lambda (c - P)) sqrt(det J)."""
    lam = _check_lambda(lam)
    lo, hi, weight = _profile(channel)
    z, _ = integrate_interval(lambda t: weight(t, lam), lo, hi)
    return 2.0 ** (lam * float(P)) * z


@dataclass(frozen=True, eq=False)
class TiltedPrior:
    """Normalized tilted Jeffreys density in the 1-D working coordinate."""

    channel: object
    lam: float
    P: float
    Z: float            # normalization: integral of the unnormalized weight
    density: callable   # vectorized; radial marginal for ball spaces
    lo: float
    hi: float


def tilted_prior(channel, lam, P=0.0):
    """Construct the tilted Jeffreys prior (the tilt does not depend on P)."""
    lam = _check_lambda(lam)
    lo, hi, weight = _profile(channel)
    z, _ = integrate_interval(lambda t: weight(t, lam), lo, hi, _PRIOR_RULE)
    if not (np.isfinite(z) and z > 0):
        raise DegenerateChannelError(
            f"tilted_prior: normalization is {z!r}; Fisher information vanishes on {channel.kind!r}"
        )
    return TiltedPrior(
        channel=channel,
        lam=lam,
        P=float(P),
        Z=z,
        density=lambda t, _w=weight, _z=z, _l=lam: _w(t, _l) / _z,
        lo=lo,
        hi=hi,
    )


def average_cost(channel, lam):
    """Tilted mean cost M(lambda), the ratio of the two tilted integrals."""
    lam = _check_lambda(lam)
    lo, hi, weight = _profile(channel)
    z, _ = integrate_interval(lambda t: weight(t, lam), lo, hi)
    if not (np.isfinite(z) and z > 0):
        raise DegenerateChannelError(f"average_cost: degenerate weight on {channel.kind!r}")
    num, _ = integrate_interval(lambda t: channel.cost(t) * weight(t, lam), lo, hi)
    return num / z


@dataclass(frozen=True, eq=False)
class JeffreysSolution:
    """Solved tilt for a (channel, P) pair with the capacity closure."""

    channel: object
    P: float
    lambda_star: float
    jf: float
    m_at_star: float
    capacity_fn: callable


def _capacity_closure(d, jf):
    log_jf = math.log2(jf)

    def capacity(n_r):
        if n_r < 1:
            raise DomainError("capacity_fn: n_r must be >= 1")
        return 0.5 * d * math.log2(n_r / (2.0 * math.pi * math.e)) + log_jf

    return capacity


def solve_lambda_star(channel, P, m_tol_rel=1e-10, bracket_tol=1e-12):
    """Smallest tilt whose prior satisfies the average-power budget.

    Returns lambda* = 0 when the untilted mean cost already meets P;
    otherwise bisects on the strictly decreasing M(lambda), stopping
    when the bracket width falls below ``bracket_tol * max(1, lambda)``
    or |M - P| < ``m_tol_rel * P``.
    """
    P = float(P)
    if not P > 0:
        raise DomainError("solve_lambda_star: P must be positive")
    m0 = average_cost(channel, 0.0)
    d = channel.param_space.dim
    # ties at M(0) = P resolve to lambda* = 0; the slack absorbs quadrature
    # roundoff, far below the 1e-6 scale at which activity is ever probed
    if m0 <= P + 1e-12 * max(1.0, P):
        jf = jeffreys_factor(channel, 0.0, P)
        return JeffreysSolution(channel, P, 0.0, jf, m0, _capacity_closure(d, jf))

    def _unbounded():
        return UnboundedTiltError(
            "solve_lambda_star: no finite tilt reaches the power target "
            f"(min cost appears to exceed P={P}); channel {channel.kind!r}"
        )

    lam_hi = 1.0 / P
    doublings = 0
    while True:
        try:
            m_hi = average_cost(channel, lam_hi)
        except DegenerateChannelError:
            # tilted weight underflowed: cost is bounded away from P
            raise _unbounded() from None
        if m_hi <= P:
            break
        doublings += 1
        if doublings > 60:
            raise _unbounded()
        lam_hi *= 2.0

    lam_lo = 0.0
    lam, m = lam_hi, m_hi
    while lam_hi - lam_lo > bracket_tol * max(1.0, lam_hi):
        mid = 0.5 * (lam_lo + lam_hi)
        m_mid = average_cost(channel, mid)
        if abs(m_mid - P) < m_tol_rel * P:
            lam, m = mid, m_mid
            break
        if m_mid > P:
            lam_lo = mid
        else:
            lam_hi, lam, m = mid, mid, m_mid
    jf = jeffreys_factor(channel, lam, P)
    return JeffreysSolution(channel, P, lam, jf, m, _capacity_closure(d, jf))


def asymptotic_capacity(channel, P, n_r):
    """Leading capacity terms (d/2) log2(n_r/2 pi e) + log2 JF(lambda*)."""
    return solve_lambda_star(channel, P).capacity_fn(n_r)


def mismatch_rate(channel, w, P, n_r, grid_size=1025):
    """Large-array rate achieved by an arbitrary prior w on the profile coordinate.

    Evaluates C(P) - D(w || w_tilted) + lambda* E_w[c - P] with the
    divergence in bits.  w must be vectorized, strictly positive and
    normalized on the parameter space (checked to 1e-6); densities that
    vanish on an interior subinterval are rejected.
    """
    solution = solve_lambda_star(channel, P)
    prior = tilted_prior(channel, solution.lambda_star, P)
    lo, hi = prior.lo, prior.hi
    grid = lo + (hi - lo) * (np.arange(grid_size) + 0.5) / grid_size
    w_grid = np.asarray(w(grid), dtype=float)
    if np.any(w_grid <= 0):
        raise PositivityError("mismatch_rate: prior must be strictly positive on the space")
    total, _ = integrate_interval(w, lo, hi)
    if abs(total - 1.0) > 1e-6:
        raise DomainError(f"mismatch_rate: prior integrates to {total!r}, not 1")

    def kl_integrand(t):
        wt = np.asarray(w(t), dtype=float)
        ratio = np.log2(np.where(wt > 0, wt, 1.0)) - np.log2(prior.density(t))
        return np.where(wt > 0, wt * ratio, 0.0)

    div, _ = integrate_interval(kl_integrand, lo, hi)
    mean_cost, _ = integrate_interval(lambda t: np.asarray(w(t)) * channel.cost(t), lo, hi)
    penalty = solution.lambda_star * (mean_cost - P)
    return solution.capacity_fn(n_r) - div + penalty


def prior_cdf(prior, theta):
    """F(theta), the cdf of the profile density on [lo, hi]."""
    t = float(theta)
    if t < prior.lo - 1e-12 or t > prior.hi + 1e-12:
        raise DomainError(f"prior_cdf: theta outside [{prior.lo}, {prior.hi}]")
    t = min(max(t, prior.lo), prior.hi)
    if t == prior.lo:
        return 0.0
    value, _ = integrate_interval(prior.density, prior.lo, t, _PRIOR_RULE)
    return min(max(value, 0.0), 1.0)


def prior_cdf_inverse(prior, u):
    """Solve F(theta) = u by bisection to |F - u| < 1e-12."""
    u = float(u)
    if not 0.0 <= u <= 1.0:
        raise DomainError("prior_cdf_inverse: u must lie in [0, 1]")
    if u == 0.0:
        return prior.lo
    if u == 1.0:
        return prior.hi
    lo, hi = prior.lo, prior.hi
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        f = prior_cdf(prior, mid)
        if abs(f - u) < _CDF_TOL or (hi - lo) <= 4.0 * np.finfo(float).eps * max(1.0, abs(mid)):
            break
        if f < u:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
    return mid
