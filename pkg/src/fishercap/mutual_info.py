"""Exact mutual information across n_r i.i.d. antennas via the type statistic.

For a finite output alphabet of size L, the per-bin count vector (the
type) is a sufficient statistic of the n_r-antenna output and follows a
multinomial law, so I(X; Y^{n_r}) = I(X; T) can be computed exactly by
enumerating all compositions of n_r into L parts.  Log-pmfs routinely
reach -1e4, so every mixture is accumulated in log space with a max
shift.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import BudgetError, ConvergenceError, DomainError, ValidationError
from .quad import integrate_interval
from .specfun import SQRT_2PI

EVAL_BUDGET_DEFAULT = 10 ** 8
_LOG_ZERO = -1e6  # stand-in for log 0; k * _LOG_ZERO stays finite, exp() is exactly 0


@dataclass(frozen=True, eq=False)
class DiscreteInput:
    """Finite input set with probabilities; points shape (M,) or (M, d)."""

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if pts.shape[0] != pr.shape[0] or pts.shape[0] == 0:
            raise ValidationError("DiscreteInput: points and probs must align")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise ValidationError("DiscreteInput: probs must be a probability vector")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)


@dataclass(frozen=True)
class TypeIndex:
    """Per-bin output counts; the sufficient statistic of an i.i.d. block."""

    counts: tuple

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 1 or c.size == 0 or np.any(c < 0) or not np.issubdtype(c.dtype, np.integer):
            raise ValidationError("TypeIndex: counts must be nonnegative integers")
        object.__setattr__(self, "counts", tuple(int(x) for x in c))

    @property
    def n_r(self):
        return sum(self.counts)

    def frequencies(self):
        c = np.asarray(self.counts, dtype=float)
        return c / c.sum()


def _composition_chunks(n, parts, chunk=1 << 14):
    """Yield all compositions of n into `parts` parts, colex order, in blocks."""
    k = np.zeros(parts, dtype=np.int64)
    k[0] = n
    buf = np.empty((chunk, parts), dtype=np.int64)
    fill = 0
    while True:
        buf[fill] = k
        fill += 1
        if fill == chunk:
            yield buf[:fill].copy()
            fill = 0
        # advance to the next composition (colex): move mass out of k[0]
        if k[0] > 0:
            k[0] -= 1
            k[1] += 1
            continue
        j = 1
        while j < parts and k[j] == 0:
            j += 1
        if j >= parts - 1:
            break
        t = k[j]
        k[j] = 0
        k[j + 1] += 1
        k[0] = t - 1
    if fill:
        yield buf[:fill].copy()


def _log_pmf_matrix(pmf):
    pmf = np.asarray(pmf, dtype=float)
    if pmf.ndim != 2:
        raise ValidationError("expected a (num_inputs, L) pmf matrix")
    if np.any(pmf < -1e-12) or np.any(np.abs(pmf.sum(axis=1) - 1.0) > 1e-9):
        raise ValidationError("pmf rows must be probability vectors")
    with np.errstate(divide="ignore"):
        logs = np.log(np.clip(pmf, 0.0, None))
    return np.where(pmf > 0.0, logs, _LOG_ZERO)


def _check_budget(n_r, parts, num_inputs, budget):
    n_types = math.comb(n_r + parts - 1, parts - 1)
    if n_types * num_inputs > budget:
        raise BudgetError(
            f"mutual_info: {n_types} types x {num_inputs} inputs exceeds the "
            f"budget of {budget} log-pmf evaluations; reduce L or n_r, or fall "
            "back to Monte-Carlo estimation outside this library"
        )


def mi_from_pmf_matrix(pmf, weights, n_r, budget=EVAL_BUDGET_DEFAULT):
    """I(X; T) in bits for the per-antenna pmf matrix p(l | x_i).

    Enumerates the multinomial types of n_r draws in colexicographic
    order, streamed in blocks; exact up to floating point.
    """
    pmf = np.asarray(pmf, dtype=float)
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != pmf.shape[0]:
        raise ValidationError("weights must align with the pmf rows")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ValidationError("weights must be a probability vector")
    if n_r < 1:
        raise DomainError("n_r must be >= 1")
    parts = pmf.shape[1]
    if parts == 1:
        return 0.0  # a single-outcome alphabet carries no information
    _check_budget(n_r, parts, pmf.shape[0], budget)
    logp = _log_pmf_matrix(pmf)
    logw = np.where(w > 0.0, np.log(np.clip(w, 1e-300, None)), _LOG_ZERO)

    lg_n = gammaln(n_r + 1.0)
    nats = 0.0
    for block in _composition_chunks(n_r, parts):
        log_multi = lg_n - gammaln(block + 1.0).sum(axis=1)
        ll = log_multi[:, None] + block @ logp.T  # (m, num_inputs)
        log_mix = logsumexp(ll + logw[None, :], axis=1)
        p_cond = np.exp(ll)
        nats += float((w[None, :] * p_cond * (ll - log_mix[:, None])).sum())
    return max(nats, 0.0) / math.log(2.0)


def _pmf_for_points(channel, points):
    if channel.output_kind != "finite" or channel.output_pmf is None:
        raise TypeError(f"mutual_info: channel {channel.kind!r} is not finite-output")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1:
        raise ValidationError("finite-output channels here take scalar inputs")
    return np.asarray(channel.output_pmf(pts), dtype=float)


def mi_finite_output(channel, input_dist, n_r, budget=EVAL_BUDGET_DEFAULT):
    """Exact I(X; Y^{n_r}) in bits for a finite-output channel."""
    pmf = _pmf_for_points(channel, input_dist.points)
    return mi_from_pmf_matrix(pmf, input_dist.probs, n_r, budget)


def discretize_prior(prior, grid_size):
    """Midpoint discretization of a tilted prior as a DiscreteInput."""
    if grid_size < 1:
        raise DomainError("discretize_prior: grid_size must be >= 1")
    lo, hi = prior.lo, prior.hi
    pts = lo + (hi - lo) * (np.arange(grid_size) + 0.5) / grid_size
    w = np.asarray(prior.density(pts), dtype=float)
    if np.any(w < 0):
        raise DomainError("discretize_prior: negative density")
    total = w.sum()
    if total <= 0:
        raise DomainError("discretize_prior: density vanishes on the grid")
    return DiscreteInput(pts, w / total)


def mi_prior_grid(channel, prior, grid_size, n_r, budget=EVAL_BUDGET_DEFAULT):
    """Exact MI of the discretized tilted prior across n_r antennas."""
    return mi_finite_output(channel, discretize_prior(prior, grid_size), n_r, budget)


def blahut_arimoto(channel, points, n_r, tol=1e-9, max_iter=10 ** 4,
                   budget=EVAL_BUDGET_DEFAULT, full_output=False):
    """Capacity-achieving input weights over fixed points, via Blahut-Arimoto.

    Alternates the standard updates on the type-likelihood matrix until
    the capacity upper/lower bound gap drops below ``tol`` bits.
    Returns ``(DiscreteInput, bits)``; with ``full_output`` also a dict
    carrying the per-iteration bound gaps.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size == 0:
        raise ValidationError("blahut_arimoto: points must be a nonempty 1-D array")
    pmf = _pmf_for_points(channel, pts)
    parts = pmf.shape[1]
    _check_budget(n_r, parts, pts.size, budget)
    logp = _log_pmf_matrix(pmf)

    # materialize the type log-likelihoods: rows index types, columns inputs
    lg_n = gammaln(n_r + 1.0)
    blocks = []
    for block in _composition_chunks(n_r, parts):
        log_multi = lg_n - gammaln(block + 1.0).sum(axis=1)
        blocks.append(log_multi[:, None] + block @ logp.T)
    log_lik = np.concatenate(blocks, axis=0)
    lik = np.exp(log_lik)

    m = pts.size
    log_r = np.full(m, -math.log(m))
    gaps = []
    nats_tol = tol * math.log(2.0)
    c_low = 0.0
    for _ in range(int(max_iter)):
        log_mix = logsumexp(log_lik + log_r[None, :], axis=1)
        d_x = np.where(lik > 0.0, lik * (log_lik - log_mix[:, None]), 0.0).sum(axis=0)
        r = np.exp(log_r)
        c_low = float(r @ d_x)
        c_up = float(d_x.max())
        gaps.append((c_up - c_low) / math.log(2.0))
        if c_up - c_low < nats_tol:
            break
        log_r = log_r + d_x
        log_r -= logsumexp(log_r)
    else:
        raise ConvergenceError(
            f"blahut_arimoto: bound gap {gaps[-1]:.3e} bits after {max_iter} iterations"
        )
    result = DiscreteInput(pts, np.exp(log_r) / np.exp(log_r).sum())
    bits = c_low / math.log(2.0)
    if full_output:
        return result, bits, {"gaps_bits": gaps, "iterations": len(gaps)}
    return result, bits


def mi_gaussian_sufficient(input_dist, n_r, span_sigmas=40.0):
    """Exact MI for the unit-noise scalar Gaussian channel via the sample mean.

    The mean of n_r unit-variance observations is Gaussian with variance
    1/n_r and is sufficient, so I(theta; ybar) is a one-dimensional
    mixture-entropy integral.
    """
    pts = np.asarray(input_dist.points, dtype=float)
    if pts.ndim != 1:
        raise ValidationError("mi_gaussian_sufficient: scalar inputs only")
    if n_r < 1:
        raise DomainError("mi_gaussian_sufficient: n_r must be >= 1")
    w = np.asarray(input_dist.probs, dtype=float)
    if pts.size == 1:
        return 0.0
    sigma = 1.0 / math.sqrt(n_r)
    lo = pts.min() - span_sigmas * sigma
    hi = pts.max() + span_sigmas * sigma

    def neg_mix_entropy(y):
        z = (y[:, None] - pts[None, :]) / sigma
        mix = (np.exp(-0.5 * z * z) / (SQRT_2PI * sigma)) @ w
        with np.errstate(divide="ignore", invalid="ignore"):
            ent = -mix * np.log2(mix)
        return np.where(mix > 0.0, ent, 0.0)

    h_mix, _ = integrate_interval(neg_mix_entropy, lo, hi)
    h_cond = 0.5 * math.log2(2.0 * math.pi * math.e * sigma * sigma)
    return max(h_mix - h_cond, 0.0)
