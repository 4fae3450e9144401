"""Per-antenna channel families: parameter space, cost, Fisher information.

Every channel here admits a smooth one-to-one parameterization of the
per-antenna output distribution by theta (the input itself for scalar
channels, the input magnitude for energy detection and the noncoherent
channel, the stacked real/imaginary input for the fading channel).  The
cost is the squared working coordinate in all cases, so the average
power constraint reads E[c(theta)] <= P.

A ``ChannelSpec`` bundles the callables the rest of the library needs:

* ``cost``, ``sqrt_det_fisher`` act on the 1-D working coordinate
  (theta for interval spaces, the radius r for isotropic ball spaces)
  and are vectorized.
* ``fisher`` is vectorized theta -> J(theta) for d = 1 and maps a full
  d-vector to the d x d matrix otherwise.
* finite-output channels expose ``output_pmf``; scalar continuous
  channels may expose ``output_logdensity_dtheta`` and closed-form bin
  masses through ``interval_mass_dtheta``.

Channels can also be built from JSON records, e.g.
``{"kind": "quantized_awgn", "A": 1.0, "thresholds": [-1, 0, 1]}``;
see ``channel_from_json`` for the full schema.
"""

import json
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .quad import QuadRule, integrate_semiinf
from .specfun import SQRT_2PI, _phi_raw, _q_raw, gauss_hazard, gauss_mass, gauss_phi_q
from scipy import special as _sp


@dataclass(frozen=True)
class ParameterSpace:
    """Where theta lives: an interval [lo, hi] or a radius-A ball in R^d."""

    dim: int
    shape: str  # "interval" | "ball"
    lo: float = 0.0
    hi: float = 0.0
    radius: float = 0.0
    isotropic: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("ParameterSpace.dim must be >= 1")
        if self.shape == "interval":
            if self.dim != 1 or not self.lo < self.hi:
                raise ValidationError("interval space needs dim=1 and lo < hi")
            if self.isotropic:
                raise ValidationError("isotropic only allowed for ball spaces")
        elif self.shape == "ball":
            if not self.radius > 0:
                raise ValidationError("ball space needs radius > 0")
        else:
            raise ValidationError(f"unknown shape {self.shape!r}")

    @classmethod
    def interval(cls, lo, hi):
        return cls(dim=1, shape="interval", lo=float(lo), hi=float(hi))

    @classmethod
    def ball(cls, dim, radius, isotropic=True):
        return cls(dim=dim, shape="ball", radius=float(radius), isotropic=isotropic)

    @property
    def profile_bounds(self):
        """Bounds of the 1-D working coordinate (theta, or the radius)."""
        if self.shape == "interval":
            return self.lo, self.hi
        return 0.0, self.radius


@dataclass(frozen=True)
class DitherSet:
    """Receiver-known threshold shifts with their probabilities."""

    points: tuple
    weights: tuple

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.size == 0 or p.shape != w.shape:
            raise ValidationError("DitherSet: points/weights must be matching 1-D sequences")
        if np.unique(p).size != p.size:
            raise ValidationError("DitherSet: points must be distinct")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValidationError("DitherSet: weights must be a probability vector")
        object.__setattr__(self, "points", tuple(float(x) for x in p))
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def uniform(cls, points):
        points = list(points)
        n = len(points)
        return cls(points=tuple(points), weights=tuple([1.0 / n] * n))

    def arrays(self):
        return np.asarray(self.points), np.asarray(self.weights)


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    kind: str
    param_space: ParameterSpace
    cost: Callable
    fisher: Callable
    sqrt_det_fisher: Callable
    output_kind: str  # "finite" | "continuous-scalar" | "pair-with-state"
    alphabet_size: int | None = None
    output_pmf: Callable | None = None
    output_logdensity_dtheta: Callable | None = None
    interval_mass_dtheta: Callable | None = None
    params: dict = field(default_factory=dict)


def _check_profile(theta, lo, hi, what):
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError(f"{what}: theta must be finite")
    if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
        raise DomainError(f"{what}: theta outside parameter space [{lo}, {hi}]")
    return t


# ---------------------------------------------------------------------------
# Fisher information formulas
# ---------------------------------------------------------------------------

def fisher_awgn(theta, peak):
    """Unit-variance additive Gaussian noise: J(theta) = 1 on [-A, A]."""
    t = _check_profile(theta, -peak, peak, "fisher_awgn")
    out = np.ones_like(t)
    return float(out) if np.ndim(theta) == 0 else out


def _clip_term(s):
    # Q(s) + s phi(s) - phi(s)^2 / Q(s), decaying to 0 as s -> inf.
    phi, q = gauss_phi_q(s)
    return q + s * phi - phi * gauss_hazard(s)


def fisher_clipped_awgn(theta, clip, peak=None):
    """Fisher information with output clipping at +-B.

    J(theta) = 1 - sum over s in {B+theta, B-theta} of
    (Q(s) + s phi(s) - phi(s)^2/Q(s)); the loss term vanishes as the
    clip level recedes.
    """
    if not clip > 0:
        raise DomainError("fisher_clipped_awgn: clip level must be positive")
    lo, hi = (-peak, peak) if peak is not None else (-np.inf, np.inf)
    t = _check_profile(theta, lo, hi, "fisher_clipped_awgn")
    j = 1.0 - _clip_term(clip + t) - _clip_term(clip - t)
    return float(j) if np.ndim(theta) == 0 else j


def _validate_thresholds(thresholds):
    t = np.asarray(thresholds, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValidationError("thresholds must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0):
        raise ValidationError("thresholds must be finite and strictly increasing")
    return t


def quantized_pmf_dtheta(theta, thresholds):
    """Level probabilities and their theta-derivatives for an L-level ADC.

    p(level l | theta) is the Gaussian mass of cell (t_{l-1}, t_l] around
    theta, with t_0 = -inf and t_L = +inf.  Returns arrays of shape
    ``theta.shape + (L,)``.
    """
    t = _validate_thresholds(thresholds)
    th = np.asarray(theta, dtype=float)
    edges = np.concatenate(([-np.inf], t, [np.inf]))
    lo = edges[:-1] - th[..., None]
    hi = edges[1:] - th[..., None]
    p = gauss_mass(lo, hi)
    dp = _phi_raw(lo) - _phi_raw(hi)
    return p, dp


def fisher_quantized_awgn(theta, thresholds, peak=None):
    """Fisher information of the L-level quantized Gaussian channel.

    J(theta) = sum_l [phi(theta-t_{l-1}) - phi(theta-t_l)]^2
                     / [Q(theta-t_l) - Q(theta-t_{l-1})],
    with phi(+-inf) = 0, Q(-inf) = 1, Q(inf) = 0.  Cells whose mass
    underflows contribute nothing.
    """
    lo, hi = (-peak, peak) if peak is not None else (-np.inf, np.inf)
    th = _check_profile(theta, lo, hi, "fisher_quantized_awgn")
    p, dp = quantized_pmf_dtheta(th, thresholds)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0.0, dp * dp / np.where(p > 0.0, p, 1.0), 0.0)
    j = terms.sum(axis=-1)
    return float(j) if np.ndim(theta) == 0 else j


_ENERGY_RULE = QuadRule(kind="transformed-semi-infinite", abs_tol=1e-13, rel_tol=1e-11)


def _energy_density(y, theta):
    # Density of y~ = 2|x+z|^2 given theta = |x|, in scaled-Bessel form:
    # 0.5 * exp(-(sqrt(y~) - sqrt(2) theta)^2 / 2) * i0e(theta sqrt(2 y~)).
    s = theta * np.sqrt(2.0 * y)
    expo = -0.5 * (np.sqrt(y) - math.sqrt(2.0) * theta) ** 2
    return 0.5 * np.exp(expo) * _sp.i0e(s)


def _energy_score(y, theta):
    s = theta * np.sqrt(2.0 * y)
    ratio = np.where(s > 0.0, _sp.i1e(s) / _sp.i0e(s), 0.0)
    return -2.0 * theta + np.sqrt(2.0 * y) * ratio


def fisher_energy_detection(theta, rule=None, peak=None):
    """Fisher information of the magnitude-only complex Gaussian channel.

    Given theta = |x|, the statistic 2|y|^2 is noncentral chi-square with
    2 degrees of freedom; J(theta) is the second moment of the score
    -2 theta + sqrt(2 y~) I1/I0(theta sqrt(2 y~)), computed with scaled
    Bessels and semi-infinite quadrature.
    """
    if rule is None:
        rule = _ENERGY_RULE
    hi = peak if peak is not None else np.inf
    th = _check_profile(theta, 0.0, hi, "fisher_energy_detection")

    def one(t):
        if t == 0.0:
            return 0.0  # score is identically zero

        def integrand(y):
            sc = _energy_score(y, t)
            return sc * sc * _energy_density(y, t)

        value, _ = integrate_semiinf(integrand, 0.0, rule)
        return value

    if np.ndim(theta) == 0:
        return one(float(th))
    return np.array([one(float(t)) for t in np.ravel(th)]).reshape(th.shape)


def mimo_sqrt_det_fisher(r, nt, sigma2, peak=None):
    """sqrt(det J) as a function of the input radius, isotropic estimate error.

    For channel-estimate rows with uncorrelated real/imaginary parts of
    variance (1 - sigma2)/2 per component, the lifted covariance is
    (1 - sigma2) I and

        sqrt(det J(r)) = (2(1-sigma2)/(1+sigma2 r^2))^nt
                         * sqrt(1 + (2 sigma2^2/(1-sigma2)) r^2/(1+sigma2 r^2)).
    """
    if not 0.0 < sigma2 < 1.0:
        raise DomainError("mimo_sqrt_det_fisher: sigma2 must lie in (0, 1)")
    if nt < 1:
        raise DomainError("mimo_sqrt_det_fisher: nt must be >= 1")
    hi = peak if peak is not None else np.inf
    rr = _check_profile(r, 0.0, hi, "mimo_sqrt_det_fisher")
    denom = 1.0 + sigma2 * rr * rr
    base = (2.0 * (1.0 - sigma2) / denom) ** nt
    bump = np.sqrt(1.0 + (2.0 * sigma2 ** 2 / (1.0 - sigma2)) * rr * rr / denom)
    out = base * bump
    return float(out) if np.ndim(r) == 0 else out


def mimo_fisher_matrix(theta, nt, sigma2, gamma=None):
    """Dense Fisher matrix of the imperfect-CSI fading channel.

    theta stacks real and imaginary input parts (length 2 nt).  With
    lifted estimate covariance Gamma,

        J = 2/(1+sigma2 |theta|^2) Gamma
            + 4 sigma2^2/(1+sigma2 |theta|^2)^2 theta theta^T.

    ``gamma=None`` uses the isotropic example (1 - sigma2) I.
    """
    if not 0.0 < sigma2 < 1.0:
        raise DomainError("mimo_fisher_matrix: sigma2 must lie in (0, 1)")
    th = np.asarray(theta, dtype=float)
    d = 2 * nt
    if th.shape != (d,):
        raise DomainError(f"mimo_fisher_matrix: theta must have shape ({d},)")
    if gamma is None:
        gamma = (1.0 - sigma2) * np.eye(d)
    s = 1.0 + sigma2 * float(th @ th)
    return (2.0 / s) * np.asarray(gamma, dtype=float) + (4.0 * sigma2 ** 2 / s ** 2) * np.outer(th, th)


def fisher_noncoherent(theta, sigma2, peak=None):
    """Fisher information of the noncoherent channel, J = 4 s^2 t^2/(1+s t^2)^2."""
    if not sigma2 > 0:
        raise DomainError("fisher_noncoherent: sigma2 must be positive")
    hi = peak if peak is not None else np.inf
    t = _check_profile(theta, 0.0, hi, "fisher_noncoherent")
    denom = 1.0 + sigma2 * t * t
    j = 4.0 * sigma2 ** 2 * t * t / (denom * denom)
    return float(j) if np.ndim(theta) == 0 else j


def _validate_discrete(dist, name):
    values = np.asarray(dist[0], dtype=float)
    probs = np.asarray(dist[1], dtype=float)
    if values.ndim != 1 or values.shape != probs.shape or values.size == 0:
        raise ValidationError(f"{name}: expected (values, probs) 1-D pair")
    if np.any(values < 0):
        raise DomainError(f"{name}: support must be nonnegative")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValidationError(f"{name}: probs must be a probability vector")
    return values, probs


def fisher_poisson(theta, h_dist, mu_dist, peak=None):
    """Optical intensity channel with receiver-known fading and background.

    J(theta) = E_{h,mu}[h^2 / (h theta + mu)] over the finite supports of
    the fading gain h and background intensity mu.
    """
    hv, hp = _validate_discrete(h_dist, "fisher_poisson h_dist")
    mv, mp = _validate_discrete(mu_dist, "fisher_poisson mu_dist")
    hi = peak if peak is not None else np.inf
    t = _check_profile(theta, 0.0, hi, "fisher_poisson")
    th = np.asarray(t, dtype=float)
    denom = hv[:, None, None] * th[None, None, ...] + mv[None, :, None]
    if np.any(denom <= 0):
        raise DomainError("fisher_poisson: h*theta + mu must be positive on the support")
    w = (hp[:, None] * mp[None, :])[..., None]
    j = (w * hv[:, None, None] ** 2 / denom).sum(axis=(0, 1))
    j = j.reshape(th.shape)
    return float(j) if np.ndim(theta) == 0 else j


def fisher_dithered_1bit(theta, dither, peak=None):
    """1-bit ADC with receiver-known dither shifts.

    J(theta) = E_s[phi^2(theta-s) / (Q(theta-s)(1 - Q(theta-s)))],
    evaluated as the product of the two Gaussian hazards so that deep
    tails never underflow.
    """
    if not isinstance(dither, DitherSet):
        raise ValidationError("fisher_dithered_1bit: dither must be a DitherSet")
    lo, hi = (-peak, peak) if peak is not None else (-np.inf, np.inf)
    t = _check_profile(theta, lo, hi, "fisher_dithered_1bit")
    pts, w = dither.arrays()
    u = np.asarray(t)[..., None] - pts
    terms = gauss_hazard(u) * gauss_hazard(-u)
    j = (terms * w).sum(axis=-1)
    return float(j) if np.ndim(theta) == 0 else j


def output_pmf_finite(channel, theta):
    """Output pmf of a finite-output channel at parameter theta."""
    if channel.output_kind != "finite" or channel.output_pmf is None:
        raise TypeError(f"output_pmf_finite: channel {channel.kind!r} is not finite-output")
    return channel.output_pmf(theta)


# ---------------------------------------------------------------------------
# Channel constructors
# ---------------------------------------------------------------------------

def _awgn_interval_mass(lo_edge, hi_edge, theta):
    th = np.asarray(theta, dtype=float)
    lo = np.asarray(lo_edge, dtype=float) - th
    hi = np.asarray(hi_edge, dtype=float) - th
    return gauss_mass(lo, hi), _phi_raw(lo) - _phi_raw(hi)


def awgn_channel(peak):
    """Real AWGN with unit noise variance, input on [-A, A]."""
    A = float(peak)
    if not A > 0:
        raise ValidationError("awgn_channel: peak must be positive")
    ps = ParameterSpace.interval(-A, A)

    def logdensity_dtheta(y, theta):
        r = np.asarray(y, dtype=float) - theta
        return -0.5 * np.log(2.0 * np.pi) - 0.5 * r * r, r

    return ChannelSpec(
        kind="awgn",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=lambda t: fisher_awgn(t, A),
        sqrt_det_fisher=lambda t: fisher_awgn(t, A),
        output_kind="continuous-scalar",
        output_logdensity_dtheta=logdensity_dtheta,
        interval_mass_dtheta=_awgn_interval_mass,
        params={"kind": "awgn", "A": A},
    )


def clipped_awgn_channel(peak, clip):
    """AWGN whose output saturates at +-B (atoms at the rails)."""
    A, B = float(peak), float(clip)
    if not (A > 0 and B > 0):
        raise ValidationError("clipped_awgn_channel: peak and clip must be positive")
    ps = ParameterSpace.interval(-A, A)

    def logdensity_dtheta(y, theta):
        # Density w.r.t. Lebesgue measure on (-B, B) plus atoms at +-B.
        yy = np.asarray(y, dtype=float)
        r = yy - theta
        interior = (-0.5 * np.log(2.0 * np.pi) - 0.5 * r * r, r)
        _, q_hi = gauss_phi_q(B - theta)
        _, q_lo = gauss_phi_q(B + theta)
        logp = np.where(yy >= B, np.log(q_hi), np.where(yy <= -B, np.log(q_lo), interior[0]))
        dlog = np.where(
            yy >= B, gauss_hazard(B - theta), np.where(yy <= -B, -gauss_hazard(B + theta), interior[1])
        )
        return logp, dlog

    return ChannelSpec(
        kind="clipped_awgn",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=lambda t: fisher_clipped_awgn(t, B, peak=A),
        sqrt_det_fisher=lambda t: np.sqrt(fisher_clipped_awgn(t, B, peak=A)),
        output_kind="continuous-scalar",
        output_logdensity_dtheta=logdensity_dtheta,
        params={"kind": "clipped_awgn", "A": A, "B": B},
    )


def truncated_awgn_channel(peak, support_radius):
    """AWGN conditioned on |y| < B: a bounded-support output family.

    Serves as the bounded-tail case for quantized-receiver scaling
    studies.  J(theta) is the variance of the truncated Gaussian.
    """
    A, B = float(peak), float(support_radius)
    if not (A > 0 and B > 0):
        raise ValidationError("truncated_awgn_channel: peak and radius must be positive")
    ps = ParameterSpace.interval(-A, A)

    def _z(theta):
        return gauss_mass(-B - np.asarray(theta, dtype=float), B - np.asarray(theta, dtype=float))

    def fisher(theta):
        t = _check_profile(theta, -A, A, "truncated_awgn.fisher")
        a = -B - t
        b = B - t
        z = gauss_mass(a, b)
        pa, pb = _phi_raw(a), _phi_raw(b)
        j = 1.0 + (a * pa - b * pb) / z - ((pa - pb) / z) ** 2
        return float(j) if np.ndim(theta) == 0 else j

    def interval_mass(lo_edge, hi_edge, theta):
        t = np.asarray(theta, dtype=float)
        lo = np.clip(np.asarray(lo_edge, dtype=float), -B, B)
        hi = np.clip(np.asarray(hi_edge, dtype=float), -B, B)
        m, dm = _awgn_interval_mass(lo, hi, t)
        z = _z(t)
        dz = _phi_raw(-B - t) - _phi_raw(B - t)
        return m / z, dm / z - m * dz / (z * z)

    def logdensity_dtheta(y, theta):
        yy = np.asarray(y, dtype=float)
        if np.any(np.abs(yy) >= B):
            raise DomainError("truncated_awgn: outputs lie strictly inside (-B, B)")
        r = yy - theta
        z = _z(theta)
        dz = _phi_raw(-B - theta) - _phi_raw(B - theta)
        return (-0.5 * np.log(2.0 * np.pi) - 0.5 * r * r - np.log(z), r - dz / z)

    return ChannelSpec(
        kind="truncated_awgn",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=fisher,
        sqrt_det_fisher=lambda t: np.sqrt(fisher(t)),
        output_kind="continuous-scalar",
        output_logdensity_dtheta=logdensity_dtheta,
        interval_mass_dtheta=interval_mass,
        params={"kind": "truncated_awgn", "A": A, "B": B},
    )


def quantized_awgn_channel(peak, thresholds):
    """AWGN followed by an L-level ADC with the given thresholds."""
    A = float(peak)
    t = _validate_thresholds(thresholds)
    if not A > 0:
        raise ValidationError("quantized_awgn_channel: peak must be positive")
    ps = ParameterSpace.interval(-A, A)
    L = t.size + 1

    def pmf(theta):
        th = _check_profile(theta, -A, A, "quantized_awgn.output_pmf")
        p, _ = quantized_pmf_dtheta(th, t)
        return p

    return ChannelSpec(
        kind="quantized_awgn",
        param_space=ps,
        cost=lambda x: np.square(np.asarray(x, dtype=float)),
        fisher=lambda x: fisher_quantized_awgn(x, t, peak=A),
        sqrt_det_fisher=lambda x: np.sqrt(fisher_quantized_awgn(x, t, peak=A)),
        output_kind="finite",
        alphabet_size=L,
        output_pmf=pmf,
        params={"kind": "quantized_awgn", "A": A, "thresholds": [float(x) for x in t]},
    )


def energy_detection_channel(peak, rule=None):
    """Complex AWGN observed through the magnitude only; theta = |x| in [0, A]."""
    A = float(peak)
    if not A > 0:
        raise ValidationError("energy_detection_channel: peak must be positive")
    ps = ParameterSpace.interval(0.0, A)
    memo = {}

    def fisher(theta):
        th = _check_profile(theta, 0.0, A, "energy_detection.fisher")

        def lookup(t):
            v = memo.get(t)
            if v is None:
                v = fisher_energy_detection(t, rule=rule, peak=A)
                memo[t] = v
            return v

        if np.ndim(theta) == 0:
            return lookup(float(th))
        return np.array([lookup(float(x)) for x in np.ravel(th)]).reshape(th.shape)

    def logdensity_dtheta(y, theta):
        # y here is the scaled energy statistic 2|output|^2
        yy = np.asarray(y, dtype=float)
        if np.any(yy < 0):
            raise DomainError("energy_detection: the energy statistic is nonnegative")
        with np.errstate(divide="ignore"):
            logp = np.log(_energy_density(yy, theta))  # -inf far in the tail
        return logp, _energy_score(yy, theta)

    return ChannelSpec(
        kind="energy_detection",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=fisher,
        sqrt_det_fisher=lambda t: np.sqrt(fisher(t)),
        output_kind="continuous-scalar",
        output_logdensity_dtheta=logdensity_dtheta,
        params={"kind": "energy_detection", "A": A},
    )


def mimo_imperfect_csi_channel(peak, nt, sigma2):
    """Fading channel with isotropic channel-estimate error of variance sigma2.

    Parameter space is the radius-A ball in R^(2 nt); cost and
    sqrt(det J) depend on the radius only.
    """
    A = float(peak)
    nt = int(nt)
    if not A > 0 or nt < 1:
        raise ValidationError("mimo_imperfect_csi_channel: need peak > 0 and nt >= 1")
    if not 0.0 < sigma2 < 1.0:
        raise DomainError("mimo_imperfect_csi_channel: sigma2 must lie in (0, 1)")
    ps = ParameterSpace.ball(dim=2 * nt, radius=A, isotropic=True)

    return ChannelSpec(
        kind="mimo_imperfect_csi",
        param_space=ps,
        cost=lambda r: np.square(np.asarray(r, dtype=float)),
        fisher=lambda th: mimo_fisher_matrix(th, nt, sigma2),
        sqrt_det_fisher=lambda r: mimo_sqrt_det_fisher(r, nt, sigma2, peak=A),
        output_kind="pair-with-state",
        params={"kind": "mimo_imperfect_csi", "A": A, "nt": nt, "sigma2": float(sigma2)},
    )


def noncoherent_channel(peak, sigma2):
    """Fading with no channel estimate; output depends on |x| = theta only."""
    A = float(peak)
    if not A > 0:
        raise ValidationError("noncoherent_channel: peak must be positive")
    if not sigma2 > 0:
        raise DomainError("noncoherent_channel: sigma2 must be positive")
    ps = ParameterSpace.interval(0.0, A)

    def sdf(theta):
        t = _check_profile(theta, 0.0, A, "noncoherent.sqrt_det_fisher")
        out = 2.0 * sigma2 * t / (1.0 + sigma2 * t * t)
        return float(out) if np.ndim(theta) == 0 else out

    return ChannelSpec(
        kind="noncoherent",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=lambda t: fisher_noncoherent(t, sigma2, peak=A),
        sqrt_det_fisher=sdf,
        output_kind="continuous-scalar",
        params={"kind": "noncoherent", "A": A, "sigma2": float(sigma2)},
    )


def poisson_channel(peak, h_dist, mu_dist):
    """Optical intensity channel; theta in [0, A] is the transmitted intensity."""
    A = float(peak)
    if not A > 0:
        raise ValidationError("poisson_channel: peak must be positive")
    hv, hp = _validate_discrete(h_dist, "poisson_channel h_dist")
    mv, mp = _validate_discrete(mu_dist, "poisson_channel mu_dist")
    ps = ParameterSpace.interval(0.0, A)
    h = (hv, hp)
    mu = (mv, mp)

    return ChannelSpec(
        kind="poisson",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=lambda t: fisher_poisson(t, h, mu, peak=A),
        sqrt_det_fisher=lambda t: np.sqrt(fisher_poisson(t, h, mu, peak=A)),
        output_kind="pair-with-state",
        params={
            "kind": "poisson",
            "A": A,
            "h": {"values": hv.tolist(), "probs": hp.tolist()},
            "mu": {"values": mv.tolist(), "probs": mp.tolist()},
        },
    )


def dithered_onebit_channel(peak, dither):
    """1-bit ADC with dithering; outputs are the pairs (s_i, sign).

    Outcome order: (s_0, +1), (s_0, -1), (s_1, +1), ... with
    p(y, s | theta) = p(s) Q((s - theta) y).
    """
    A = float(peak)
    if not A > 0:
        raise ValidationError("dithered_onebit_channel: peak must be positive")
    if not isinstance(dither, DitherSet):
        dither = DitherSet.uniform(dither)
    pts, w = dither.arrays()
    ps = ParameterSpace.interval(-A, A)

    def pmf(theta):
        th = _check_profile(theta, -A, A, "dithered_onebit.output_pmf")
        u = pts - np.asarray(th)[..., None]
        q_plus = _q_raw(u)          # y = +1
        q_minus = _q_raw(-u)        # y = -1
        stacked = np.stack([w * q_plus, w * q_minus], axis=-1)
        return stacked.reshape(np.asarray(th).shape + (2 * pts.size,))

    return ChannelSpec(
        kind="dithered_onebit",
        param_space=ps,
        cost=lambda t: np.square(np.asarray(t, dtype=float)),
        fisher=lambda t: fisher_dithered_1bit(t, dither, peak=A),
        sqrt_det_fisher=lambda t: np.sqrt(fisher_dithered_1bit(t, dither, peak=A)),
        output_kind="finite",
        alphabet_size=2 * pts.size,
        output_pmf=pmf,
        params={"kind": "dithered_onebit", "A": A, "points": pts.tolist(), "weights": w.tolist()},
    )


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------

def channel_from_json(record):
    """Build a ChannelSpec from a JSON record (dict or JSON string).

    Supported kinds and fields:

    * ``awgn``: A
    * ``clipped_awgn``: A, B
    * ``truncated_awgn``: A, B
    * ``quantized_awgn``: A, thresholds
    * ``energy_detection``: A
    * ``mimo_imperfect_csi``: A, nt, sigma2
    * ``noncoherent``: A, sigma2
    * ``poisson``: A, h {values, probs}, mu {values, probs}
    * ``dithered_onebit``: A, points [, weights]
    """
    if isinstance(record, (str, bytes)):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as e:
            raise ValidationError(f"channel_from_json: invalid JSON ({e})") from e
    if not isinstance(record, dict):
        raise ValidationError("channel_from_json: expected a JSON object")
    kind = record.get("kind")
    try:
        if kind == "awgn":
            return awgn_channel(record["A"])
        if kind == "clipped_awgn":
            return clipped_awgn_channel(record["A"], record["B"])
        if kind == "truncated_awgn":
            return truncated_awgn_channel(record["A"], record["B"])
        if kind == "quantized_awgn":
            return quantized_awgn_channel(record["A"], record["thresholds"])
        if kind == "energy_detection":
            return energy_detection_channel(record["A"])
        if kind == "mimo_imperfect_csi":
            return mimo_imperfect_csi_channel(record["A"], record["nt"], record["sigma2"])
        if kind == "noncoherent":
            return noncoherent_channel(record["A"], record["sigma2"])
        if kind == "poisson":
            h = (record["h"]["values"], record["h"]["probs"])
            mu = (record["mu"]["values"], record["mu"]["probs"])
            return poisson_channel(record["A"], h, mu)
        if kind == "dithered_onebit":
            pts = record["points"]
            if "weights" in record:
                return dithered_onebit_channel(record["A"], DitherSet(tuple(pts), tuple(record["weights"])))
            return dithered_onebit_channel(record["A"], DitherSet.uniform(pts))
    except KeyError as e:
        raise ValidationError(f"channel_from_json: kind {kind!r} is missing field {e}") from e
    raise ValidationError(f"channel_from_json: unknown channel kind {kind!r}")


def channel_from_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return channel_from_json(fh.read())
