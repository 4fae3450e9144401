"""Constellation design from tilted Jeffreys priors.

The exact design pushes a midpoint grid on [0, 1] through the inverse
prior cdf (a compander), then rescales so the average power budget
holds.  When the cdf has no closed form, a polynomial density is fitted
to the prior by Newton descent on the KL divergence with a logarithmic
barrier enforcing positivity; the polynomial cdf then inverts in closed
form plus bisection.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as _la

from .errors import ConvergenceError, DomainError, PositivityError, ValidationError
from .jeffreys import LN2, prior_cdf_inverse, solve_lambda_star, tilted_prior


def midpoint_grid(m):
    """The m midpoints (2i - 1) / (2m), avoiding the cdf endpoints."""
    if m < 1:
        raise DomainError("midpoint_grid: m must be >= 1")
    return (2.0 * np.arange(1, m + 1) - 1.0) / (2.0 * m)


@dataclass(frozen=True, eq=False)
class Constellation:
    """Finite input set; points has shape (M,) or (M, d)."""

    points: np.ndarray
    probs: np.ndarray
    avg_power: float
    peak_power: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if pts.shape[0] != pr.shape[0] or pts.shape[0] == 0:
            raise ValidationError("Constellation: points and probs must align")
        if np.any(pr < 0) or abs(pr.sum() - 1.0) > 1e-12:
            raise ValidationError("Constellation: probs must be a probability vector")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)


def _power_per_point(points):
    pts = np.asarray(points, dtype=float)
    return pts * pts if pts.ndim == 1 else (pts * pts).sum(axis=1)


def _scaled_constellation(raw_points, P, probs=None):
    raw = np.asarray(raw_points, dtype=float)
    m = raw.shape[0]
    probs = np.full(m, 1.0 / m) if probs is None else np.asarray(probs, dtype=float)
    mean_pow = float(probs @ _power_per_point(raw))
    c_p = 1.0 if mean_pow <= P or mean_pow == 0.0 else math.sqrt(P / mean_pow)
    pts = c_p * raw
    per = _power_per_point(pts)
    return Constellation(pts, probs, float(probs @ per), float(per.max()))


def jeffreys_constellation(channel, P, M):
    """Inverse-cdf constellation of size M for the tilted prior at (channel, P).

    Points are c_P F^{-1}(u) over the midpoint grid with uniform
    probabilities; c_P = min(1, sqrt(P / mean raw power)) keeps the
    average power within budget.
    """
    if M < 2:
        raise DomainError("jeffreys_constellation: M must be >= 2")
    solution = solve_lambda_star(channel, P)
    prior = tilted_prior(channel, solution.lambda_star, P)
    raw = np.array([prior_cdf_inverse(prior, u) for u in midpoint_grid(M)])
    return _scaled_constellation(raw, P)


def pam_constellation(channel, P, M):
    """Uniform grid on [lo, hi] under the same power scaling; the baseline."""
    lo, hi = channel.param_space.profile_bounds
    if M < 2:
        raise DomainError("pam_constellation: M must be >= 2")
    return _scaled_constellation(np.linspace(lo, hi, M), P)


# ---------------------------------------------------------------------------
# Polynomial density fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyDensity:
    """Density sum_i coeffs[i] theta^i on [lo, hi], positive on the fit grid."""

    coeffs: np.ndarray
    support: tuple
    grid_points: int = 4097

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        lo, hi = self.support
        if not lo < hi:
            raise ValidationError("PolyDensity: support must satisfy lo < hi")
        grid = np.linspace(lo, hi, self.grid_points)
        vals = np.polynomial.polynomial.polyval(grid, c)
        if np.any(vals <= 0):
            raise PositivityError("PolyDensity: not strictly positive on the support grid")
        alphas = _moment_integrals(len(c) - 1, lo, hi)
        if abs(c @ alphas - 1.0) > 1e-9:
            raise ValidationError("PolyDensity: coefficients do not integrate to 1")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "support", (float(lo), float(hi)))

    def pdf(self, theta):
        return np.polynomial.polynomial.polyval(np.asarray(theta, dtype=float), self.coeffs)


def _moment_integrals(degree, lo, hi):
    i = np.arange(degree + 1)
    return (hi ** (i + 1) - lo ** (i + 1)) / (i + 1)


def poly_cdf(p, theta):
    """Closed-form cdf F(theta) = sum_i xi_i (theta^(i+1) - lo^(i+1)) / (i+1)."""
    lo, hi = p.support
    t = np.asarray(theta, dtype=float)
    if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
        raise DomainError(f"poly_cdf: theta outside [{lo}, {hi}]")
    i = np.arange(p.coeffs.size)
    terms = (t[..., None] ** (i + 1) - lo ** (i + 1)) / (i + 1)
    out = np.clip(terms @ p.coeffs, 0.0, 1.0)
    return float(out) if np.ndim(theta) == 0 else out


def poly_cdf_inverse(p, u):
    """Invert the polynomial cdf by bisection to |F(theta) - u| < 1e-12."""
    u = float(u)
    if not 0.0 <= u <= 1.0:
        raise DomainError("poly_cdf_inverse: u must lie in [0, 1]")
    lo, hi = p.support
    if u == 0.0:
        return lo
    if u == 1.0:
        return hi
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        f = poly_cdf(p, mid)
        if abs(f - u) < 1e-12 or (hi - lo) <= 4.0 * np.finfo(float).eps * max(1.0, abs(mid)):
            break
        if f < u:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
    return mid


@dataclass(frozen=True)
class BarrierSchedule:
    """Decreasing barrier weights with the per-stage Newton stopping rule.

    The continuation starts barrier-dominated (gamma_0 = 10), so the
    first stage is an easy solve from the uniform start and every later
    stage is warm-started; cold starts at small gamma stall against the
    positivity boundary for strongly peaked targets.
    """

    gamma_0: float = 10.0
    decay: float = 0.1
    gamma_min: float = 1e-8
    newton_tol: float = 1e-9
    max_newton: int = 100

    def __post_init__(self):
        if not self.gamma_0 > self.gamma_min > 0:
            raise ValidationError("BarrierSchedule: need gamma_0 > gamma_min > 0")
        if not 0.0 < self.decay < 1.0:
            raise ValidationError("BarrierSchedule: decay must lie in (0, 1)")
        if not (self.newton_tol > 0 and self.max_newton >= 1):
            raise ValidationError("BarrierSchedule: need newton_tol > 0 and max_newton >= 1")

    def stages(self):
        out = [self.gamma_0]
        g = self.gamma_0
        while g > self.gamma_min * (1.0 + 1e-9):
            g = max(g * self.decay, self.gamma_min)
            out.append(g)
        return out


def _simpson_weights(n, lo, hi):
    # n odd node count over [lo, hi]
    if n % 2 == 0:
        raise ValidationError("composite Simpson needs an odd node count")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (hi - lo) / (3.0 * (n - 1))


class BarrierObjective:
    """Grid discretization of D(f_xi || prior) + gamma D(uniform || f_xi).

    Free coordinates are xi_1..xi_d; xi_0 follows from the moment
    identity so every candidate integrates to one.  Gradient and
    Hessian are the analytic forms

        grad_i = integral b_i psi dtheta,
        hess_ij = integral b_i b_j (1/f + gamma/(W f^2)) dtheta,

    with b_i = d f / d xi_i and
    psi = ln f + 1 + lambda* ln2 c - (1/2) ln J - (gamma/W) / f;
    the ln 2 converts the base-2 tilt into the natural-log divergence.

    The solve runs on the affinely normalized coordinate tau in [-1, 1]
    (both divergences are invariant under the change of variables), so
    the monomial Gram matrix stays well conditioned for wide supports;
    ``to_poly_density`` maps the solution back to the theta power basis.
    """

    def __init__(self, channel, lam_star, degree, gamma, grid_points=4097):
        if degree < 0:
            raise DomainError("BarrierObjective: degree must be >= 0")
        if channel.param_space.shape != "interval":
            raise DomainError("BarrierObjective: needs a 1-D interval parameter space")
        lo, hi = channel.param_space.profile_bounds
        self.lo, self.hi = lo, hi
        self.scale = 0.5 * (hi - lo)
        self.center = 0.5 * (hi + lo)
        self.width = 2.0  # tau support width
        self.degree = degree
        self.gamma = float(gamma)
        self.lam_star = float(lam_star)
        self.grid = np.linspace(-1.0, 1.0, grid_points)
        self.weights = _simpson_weights(grid_points, -1.0, 1.0)
        self.alphas = _moment_integrals(degree, -1.0, 1.0)

        theta = self.center + self.scale * self.grid
        cost = np.asarray(channel.cost(theta), dtype=float)
        j = np.asarray(channel.fisher(theta), dtype=float)
        if np.any(j <= 0):
            raise DomainError("BarrierObjective: target prior vanishes on the grid")
        log_w = -self.lam_star * LN2 * cost + 0.5 * np.log(j)
        log_w -= math.log(float(self.weights @ np.exp(log_w - log_w.max()))) + log_w.max()
        self.log_target = log_w

        powers = np.vander(self.grid, degree + 1, increasing=True)  # (n, degree+1)
        self.powers = powers
        # basis of the free coordinates: d f / d xi_i, i = 1..degree
        self.basis = powers[:, 1:] - self.alphas[1:] / self.alphas[0]

    def full_coeffs(self, xi_free):
        xi_free = np.asarray(xi_free, dtype=float)
        if xi_free.shape != (self.degree,):
            raise DomainError(f"expected {self.degree} free coefficients")
        xi0 = (1.0 - xi_free @ self.alphas[1:]) / self.alphas[0]
        return np.concatenate(([xi0], xi_free))

    def density_on_grid(self, xi_free):
        return self.powers @ self.full_coeffs(xi_free)

    def to_poly_density(self, xi_free, grid_points=None):
        """Map tau-basis coefficients to a PolyDensity in theta coordinates."""
        tau_coef = self.full_coeffs(xi_free) / self.scale  # density Jacobian
        p = np.polynomial.Polynomial(tau_coef, domain=[self.lo, self.hi], window=[-1.0, 1.0])
        theta_coef = p.convert(domain=[self.lo, self.hi], window=[self.lo, self.hi]).coef
        if theta_coef.size < self.degree + 1:
            theta_coef = np.pad(theta_coef, (0, self.degree + 1 - theta_coef.size))
        return PolyDensity(theta_coef, (self.lo, self.hi),
                           grid_points if grid_points else len(self.grid))

    def value(self, xi_free):
        f = self.density_on_grid(xi_free)
        if np.any(f <= 0):
            return math.inf
        kl = float(self.weights @ (f * (np.log(f) - self.log_target)))
        barrier = float(self.weights @ (-np.log(f * self.width))) / self.width
        return kl + self.gamma * barrier

    def gradient(self, xi_free):
        f = self.density_on_grid(xi_free)
        if np.any(f <= 0):
            raise PositivityError("gradient requested at an infeasible point")
        psi = np.log(f) + 1.0 - self.log_target - (self.gamma / self.width) / f
        return self.basis.T @ (self.weights * psi)

    def hessian(self, xi_free):
        f = self.density_on_grid(xi_free)
        if np.any(f <= 0):
            raise PositivityError("hessian requested at an infeasible point")
        curv = self.weights * (1.0 / f + (self.gamma / self.width) / (f * f))
        return (self.basis * curv[:, None]).T @ self.basis


@dataclass
class PolyFitInfo:
    gammas: list = field(default_factory=list)
    newton_iterations: list = field(default_factory=list)
    stop_reasons: list = field(default_factory=list)
    objective_path: list = field(default_factory=list)
    min_hessian_eigenvalues: list = field(default_factory=list)
    final_gradient_norm: float = math.nan

    @property
    def total_iterations(self):
        return sum(self.newton_iterations)


def _newton_stage(problem, xi, schedule, info):
    """Damped Newton until the gradient-norm stop or the objective floor.

    The step is capped by the exact fraction-to-boundary rule (f is
    affine in the coefficients, so the largest positive step is known in
    closed form), then backtracks on strict objective decrease.  A stage
    also ends when the Newton decrement shows the remaining improvement
    is below the resolution of the discretized objective; strongly
    peaked targets end their small-gamma stages this way, pressed
    against the positivity boundary.
    """
    obj = problem.value(xi)
    iters = 0
    while True:
        g = problem.gradient(xi)
        gnorm = float(np.linalg.norm(g))
        if gnorm < schedule.newton_tol:
            return xi, iters, "gradient"
        if iters >= schedule.max_newton:
            raise ConvergenceError(
                f"fit_poly_density: Newton stalled at stage gamma={problem.gamma:g} "
                f"after {iters} steps (grad norm {gnorm:.3e})"
            )
        h = problem.hessian(xi)
        try:
            step = -_la.cho_solve(_la.cho_factor(h), g)
        except _la.LinAlgError as e:
            raise ConvergenceError(
                f"fit_poly_density: Hessian not PD at gamma={problem.gamma:g}") from e
        decrement2 = float(-g @ step)
        floor = 1.0 + abs(obj)
        if decrement2 * 0.5 <= 1e-15 * floor:
            return xi, iters, "objective-floor"
        info.min_hessian_eigenvalues.append(float(_la.eigvalsh(h)[0]))
        df = problem.basis @ step
        neg = df < 0
        if np.any(neg):
            f = problem.density_on_grid(xi)
            t = min(1.0, 0.995 * float(np.min(-f[neg] / df[neg])))
        else:
            t = 1.0
        accepted = False
        while t >= 1e-14:
            cand = xi + t * step
            cand_obj = problem.value(cand)
            if cand_obj < obj:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            if decrement2 * 0.5 <= 1e-12 * floor:
                return xi, iters, "objective-floor"
            raise ConvergenceError(
                f"fit_poly_density: line search failed at stage gamma={problem.gamma:g}"
            )
        xi = cand
        obj = cand_obj
        info.objective_path.append(obj)
        iters += 1


def fit_poly_density(channel, lam_star, degree, schedule=None, grid_points=4097,
                     full_output=False):
    """Fit a positive polynomial density of the given degree to the tilted prior.

    Barrier continuation with a damped Newton solve per stage, starting
    from the uniform density.  Deterministic: identical inputs give
    identical iterates and iteration counts.
    """
    if schedule is None:
        schedule = BarrierSchedule()
    xi = np.zeros(degree)
    info = PolyFitInfo()
    problem = None
    for gamma in schedule.stages():
        problem = BarrierObjective(channel, lam_star, degree, gamma, grid_points)
        xi, iters, reason = _newton_stage(problem, xi, schedule, info)
        info.gammas.append(gamma)
        info.newton_iterations.append(iters)
        info.stop_reasons.append(reason)
        info.final_gradient_norm = float(np.linalg.norm(problem.gradient(xi)))
    poly = problem.to_poly_density(xi, grid_points)
    return (poly, info) if full_output else poly


def approx_jeffreys_constellation(p, P, M):
    """Constellation from the fitted polynomial cdf, same scaling rule."""
    if M < 2:
        raise DomainError("approx_jeffreys_constellation: M must be >= 2")
    raw = np.array([poly_cdf_inverse(p, u) for u in midpoint_grid(M)])
    return _scaled_constellation(raw, P)


def constellation_to_csv(c):
    """CSV text for a constellation: index, point component(s), probability."""
    pts = np.asarray(c.points, dtype=float)
    if pts.ndim == 1:
        header = "index,point (input units),probability"
        cols = [[f"{v:.17g}"] for v in pts]
    else:
        header = "index," + ",".join(
            f"point_{k} (input units)" for k in range(pts.shape[1])) + ",probability"
        cols = [[f"{v:.17g}" for v in row] for row in pts]
    lines = [header]
    for i, (comp, w) in enumerate(zip(cols, c.probs)):
        lines.append(",".join([str(i), *comp, f"{w:.17g}"]))
    return "\n".join(lines) + "\n"


def radial_constellation_isotropic(channel, P, M_r, directions):
    """Radius-times-direction design for isotropic ball parameter spaces.

    Radii come from the inverse radial cdf on the midpoint grid; the
    caller supplies the unit direction vectors.  Points enumerate
    (radius, direction) pairs with uniform probabilities.
    """
    ps = channel.param_space
    if ps.shape != "ball" or not ps.isotropic:
        raise DomainError("radial_constellation_isotropic: channel is not isotropic")
    dirs = np.asarray(directions, dtype=float)
    if dirs.ndim != 2 or dirs.shape[0] == 0 or dirs.shape[1] != ps.dim:
        raise ValidationError(f"directions must be a nonempty (k, {ps.dim}) array")
    norms = np.linalg.norm(dirs, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValidationError("directions must be unit vectors")
    if M_r < 1:
        raise DomainError("radial_constellation_isotropic: M_r must be >= 1")
    solution = solve_lambda_star(channel, P)
    prior = tilted_prior(channel, solution.lambda_star, P)
    radii = np.array([prior_cdf_inverse(prior, u) for u in midpoint_grid(M_r)])
    raw = np.concatenate([r * dirs for r in radii], axis=0)
    return _scaled_constellation(raw, P)
