"""Explicit competitor surfaces against the totally geodesic hypercone.

Two families: a catenoid neck glued to an exponentially decaying disk for
2-dimensional surfaces, and an exponential spindle glued to an integral
profile for radial graphs in any dimension.  Each carries a closed-form area
(or upper bound) plus a quadrature route, and a parameter search looks for a
competitor whose normalized area drops below 1/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, optimize
from scipy.integrate import solve_ivp

from .errors import NumericError
from .geometry import ConeSpace
from .profiles import LengthProfile, QuadratureConfig, RadialProfile

HALF_PI = math.pi / 2.0
_RESIDUAL_TOL = 1e-12


# ---------------------------------------------------------------------------
# catenoid + disk family (2-dimensional surfaces in a 3-dimensional cone)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatenoidParams:
    """Catenoid patch r = f(t) with f cos t = a cosh((f sin t - b)/a).

    Solves f(0) = 1, f(delta) = alpha * (junction value), with the neck
    parameter a small and the offset b beyond the patch.
    """

    delta: float
    alpha: float
    a: float
    b: float

    def __post_init__(self):
        r1, r2 = catenoid_residuals(self.a, self.b, self.delta, self.alpha)
        if max(abs(r1), abs(r2)) > _RESIDUAL_TOL:
            raise ValueError(f"junction equations violated: residuals ({r1:.2e}, {r2:.2e})")
        if not self.a < self.alpha * math.cos(self.delta):
            raise ValueError("need a < alpha*cos(delta) for the area closed form")


def catenoid_residuals(a: float, b: float, delta: float, alpha: float):
    r1 = a * math.cosh(b / a) - 1.0
    r2 = a * math.cosh((alpha * math.sin(delta) - b) / a) - alpha * math.cos(delta)
    return r1, r2


def solve_catenoid(delta: float, alpha: float, max_iter: int = 100) -> Optional[CatenoidParams]:
    """Damped Newton solve of the two junction equations for (a, b).

    Seeds from the small-delta asymptotic a ~ alpha*delta/(-ln alpha).
    Returns None when the converged point violates a < alpha*cos(delta)
    (no catenoid patch in that regime).
    """
    if not 0.0 < delta < math.pi / 4.0:
        raise ValueError(f"junction angle must lie in (0, pi/4), got {delta}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"junction value must lie in (0, 1), got {alpha}")

    a = alpha * delta / (-math.log(alpha))
    b = a * math.acosh(1.0 / a)

    def res_norm(a_, b_):
        if a_ <= 0.0 or abs(b_ / a_) > 700.0 or abs((alpha * math.sin(delta) - b_) / a_) > 700.0:
            return math.inf
        r1, r2 = catenoid_residuals(a_, b_, delta, alpha)
        return max(abs(r1), abs(r2))

    for _ in range(max_iter):
        r1, r2 = catenoid_residuals(a, b, delta, alpha)
        if max(abs(r1), abs(r2)) < 1e-14:
            break
        u, v = b / a, (alpha * math.sin(delta) - b) / a
        jac = np.array([
            [math.cosh(u) - u * math.sinh(u), math.sinh(u)],
            [math.cosh(v) - v * math.sinh(v), -math.sinh(v)],
        ])
        try:
            da, db = np.linalg.solve(jac, [-r1, -r2])
        except np.linalg.LinAlgError:
            raise NumericError("singular Jacobian in catenoid solve",
                               residual=max(abs(r1), abs(r2)))
        step = 1.0
        base = max(abs(r1), abs(r2))
        for _ in range(40):
            if res_norm(a + step * da, b + step * db) < base:
                break
            step *= 0.5
        else:
            raise NumericError("catenoid Newton stalled", residual=base)
        a, b = a + step * da, b + step * db
    else:
        raise NumericError("catenoid Newton did not converge",
                           residual=res_norm(a, b))

    if not a < alpha * math.cos(delta):
        return None
    return CatenoidParams(delta=delta, alpha=alpha, a=a, b=b)


def catenoid_profile(params: CatenoidParams) -> RadialProfile:
    """Profile f(t) on [0, delta] solving f cos t = a cosh((f sin t - b)/a)."""
    a, b, alpha = params.a, params.b, params.alpha

    def implicit(f, t):
        return f * math.cos(t) - a * math.cosh((f * math.sin(t) - b) / a)

    def f_eval(t):
        if t <= 0.0:
            return 1.0
        return optimize.brentq(implicit, 0.5 * alpha, 1.5, args=(t,), xtol=1e-15)

    def f_deriv(t):
        f = f_eval(t)
        sh = math.sinh((f * math.sin(t) - b) / a)
        return (f * (math.sin(t) + sh * math.cos(t))
                / (math.cos(t) - sh * math.sin(t)))

    return RadialProfile(lo=0.0, hi=params.delta, eval=f_eval, deriv=f_deriv)


def catenoid_area_closed_form(params: CatenoidParams, L0: float) -> float:
    """Boundary-term evaluation of the catenoid patch area."""
    a, alpha, delta = params.a, params.alpha, params.delta
    arg = a / (alpha * math.cos(delta))
    if not -1.0 <= arg <= 1.0:
        raise ValueError(f"arcsin argument {arg} out of range")
    return 0.5 * L0 * (math.sqrt(1.0 - a * a)
                       - alpha**2 * math.cos(delta)
                       * math.cos(delta + math.asin(arg)))


def check_length_profile(L: LengthProfile, samples: int = 64, tol: float = 1e-8) -> None:
    """Verify L(t)^2 + F(t)^2 <= L(0)^2 with F the cumulative integral of L.

    This comparison-geometry inequality is what makes the disk area bound
    work; tabulated length profiles must satisfy it.
    """
    ts = np.linspace(0.0, L.hi, samples + 1)
    Ls = np.array([L.eval(t) for t in ts])
    F = integrate.cumulative_trapezoid(Ls, ts, initial=0.0)
    worst = float(np.max(Ls**2 + F**2) - L.L0**2)
    if worst > tol * L.L0**2:
        raise ValueError(f"length profile violates L^2 + F^2 <= L(0)^2 by {worst:.3e}")


def disk_profile(delta: float, alpha: float, L: LengthProfile,
                 tol: float = 1e-12):
    """Exponential-profile disk r = alpha * exp(-g(t)) on t >= delta.

    g integrates L / sqrt(L0^2 - L^2) from delta; the area telescopes to
    L0 * (alpha^2 - f_end^2) / 2.  Returns (profile, area).
    """
    if not 0.0 < delta < L.hi:
        raise ValueError(f"junction {delta} outside the length profile domain")
    check_length_profile(L)
    L0 = L.L0
    if L.eval(delta) >= L0:
        raise NumericError("integrand singular at the junction: L(delta) >= L(0)")

    def dg(t, _y):
        Lt = L.eval(t)
        return [Lt / math.sqrt(max(L0 * L0 - Lt * Lt, 0.0))]

    sol = solve_ivp(dg, (delta, L.hi), [0.0], method="RK45", rtol=tol, atol=tol,
                    dense_output=True)
    if not sol.success:
        raise NumericError("disk profile integration failed", residual=None)
    g_end = float(sol.y[0][-1])
    f_end = alpha * math.exp(-g_end)
    area = 0.5 * L0 * (alpha**2 - f_end**2)

    def g_eval(t):
        return float(sol.sol(min(t, L.hi))[0])

    def f_eval(t):
        return alpha * math.exp(-g_eval(t))

    def f_deriv(t):
        return -f_eval(t) * dg(t, None)[0]

    profile = RadialProfile(lo=delta, hi=L.hi, eval=f_eval, deriv=f_deriv)
    return profile, area


# ---------------------------------------------------------------------------
# exponential + integral-profile family (radial graphs, any dimension)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpCompetitor:
    """Piecewise graph e^(-mu*theta) glued at delta to alpha*e^(-lam*g(theta))."""

    space: ConeSpace
    delta: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.delta < HALF_PI:
            raise ValueError(f"junction angle must lie in (0, pi/2), got {self.delta}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"junction value must lie in (0, 1), got {self.alpha}")

    @property
    def mu(self) -> float:
        return -math.log(self.alpha) / self.delta


def _decay_power(space: ConeSpace) -> float:
    return space.n * space.lam / math.sqrt(space.n - 1)


def exp_profile_bound(space: ConeSpace, delta: float, alpha: float) -> float:
    """Closed-form upper bound on the normalized area of the competitor."""
    n = space.n
    p = _decay_power(space)
    x = (space.lam * delta / math.log(alpha)) ** 2
    an = alpha**n
    return ((1.0 - an) * math.sqrt(1.0 + x) + an - an * math.sin(delta) ** p) / n


def exp_profile_margin(space: ConeSpace, delta: float, alpha: float) -> float:
    """1/n minus the closed-form bound, in a cancellation-free arrangement.

    Accurate for junction angles far below the square root of machine
    epsilon, where the direct bound formula loses every significant digit.
    """
    n = space.n
    p = _decay_power(space)
    x = (space.lam * delta / math.log(alpha)) ** 2
    an = alpha**n
    # 1 - sqrt(1+x) = -x / (1 + sqrt(1+x))
    return (an * math.sin(delta) ** p
            - (1.0 - an) * x / (1.0 + math.sqrt(1.0 + x))) / n


def exp_profile_log_margin(space: ConeSpace, log_delta: float, alpha: float) -> float:
    """log(gain) - log(cost) of the bound's margin, for arbitrarily small delta.

    Positive iff the closed-form bound lies strictly below 1/n.  Works from
    the logarithm of the junction angle alone, so junctions far below the
    smallest positive double remain decidable.
    """
    n = space.n
    p = _decay_power(space)
    log_alpha = math.log(alpha)
    if log_delta > -5.0:
        delta = math.exp(log_delta)
        log_sin = math.log(math.sin(delta))
    else:
        log_sin = log_delta  # sin(delta) = delta to below double precision
    log_gain = n * log_alpha + p * log_sin
    # cost = (1 - alpha^n)(sqrt(1+x) - 1),  x = (lam*delta/ln alpha)^2
    log_x = 2.0 * (log_delta + math.log(space.lam) - math.log(-log_alpha))
    x = math.exp(log_x) if log_x > -700.0 else 0.0
    log_cost = (math.log1p(-alpha**n) + log_x
                - math.log(1.0 + math.sqrt(1.0 + x)))
    return log_gain - log_cost


def _g_to_half_pi(space: ConeSpace, delta: float, tol: float = 1e-12) -> float:
    """Integral of 1/sqrt(cos^(2-2n)t - 1) from delta to pi/2."""
    n = space.n
    if n == 2:
        # integrand is exactly cot(t)
        return -math.log(math.sin(delta))

    def w(t):
        # cos^(2-2n)t - 1 via expm1 so tiny t does not round cos t to 1
        if t < 1e-4:
            log_sec = t * t / 2.0 + t**4 / 12.0  # -log(cos t) to machine precision
        else:
            log_sec = -math.log(math.cos(t))
        return 1.0 / math.sqrt(math.expm1((2 * n - 2) * log_sec))

    total = 0.0
    split = 1e-3
    if delta < split:
        # w(t) = 1/(t sqrt(n-1)) + O(t) near zero; in tau = log t the leading
        # term integrates exactly and the remainder decays like e^(2 tau)
        lead = 1.0 / math.sqrt(n - 1.0)
        lo_tau, hi_tau = math.log(delta), math.log(split)
        total += (hi_tau - lo_tau) * lead
        rem_lo = max(lo_tau, -40.0)  # remainder below e^-80: lost in rounding
        # the subtraction has a ~1e-9 relative noise floor; 1e-9 absolute in
        # the exponent keeps the resulting area accurate to ~1e-10
        val, _ = integrate.quad(
            lambda tau: math.exp(tau) * w(math.exp(tau)) - lead,
            rem_lo, hi_tau, epsabs=1e-9, epsrel=1e-8, limit=200)
        total += val
        lo = split
    else:
        lo = delta
    val, _ = integrate.quad(w, lo, HALF_PI, epsabs=tol, epsrel=tol, limit=200)
    return total + val


def exp_profile(space: ConeSpace, delta: float, alpha: float) -> RadialProfile:
    """The assembled piecewise competitor profile on [0, pi/2]."""
    comp = ExpCompetitor(space=space, delta=delta, alpha=alpha)
    mu = comp.mu
    n = space.n

    head = RadialProfile(lo=0.0, hi=delta,
                         eval=lambda th: math.exp(-mu * th),
                         deriv=lambda th: -mu * math.exp(-mu * th))

    def dg(th, _y):
        return [1.0 / math.sqrt(math.cos(th) ** (2 - 2 * n) - 1.0)]

    sol = solve_ivp(dg, (delta, HALF_PI), [0.0], method="RK45",
                    rtol=1e-12, atol=1e-14, dense_output=True)
    if not sol.success:
        raise NumericError("competitor tail integration failed")

    def g(th):
        return float(sol.sol(min(th, HALF_PI))[0])

    def tail_eval(th):
        return alpha * math.exp(-space.lam * g(th))

    def tail_deriv(th):
        return -space.lam * tail_eval(th) * dg(th, None)[0]

    tail = RadialProfile(lo=delta, hi=HALF_PI, eval=tail_eval, deriv=tail_deriv)
    return RadialProfile.piecewise([head, tail])


def exp_profile_area(space: ConeSpace, delta: float, alpha: float,
                     cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Normalized area of the assembled competitor, by quadrature.

    The head is integrated in the scaled variable u = theta/delta so tiny
    junction angles stay well conditioned; the tail telescopes exactly to
    (alpha^n - f(pi/2)^n)/n once g(pi/2) is known.
    """
    comp = ExpCompetitor(space=space, delta=delta, alpha=alpha)
    n, lam = space.n, space.lam
    log_alpha = math.log(alpha)

    scale = math.hypot(log_alpha, lam * delta)  # delta * sqrt(mu^2 + lam^2)

    def head(u):
        return alpha ** (n * u) * math.cos(delta * u) ** (n - 1)

    head_val, head_err = integrate.quad(head, 0.0, 1.0,
                                        epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                                        limit=200)
    if head_err > 100.0 * max(cfg.abs_tol, cfg.rel_tol * abs(head_val)):
        raise NumericError("head quadrature did not converge", residual=head_err)

    g_end = _g_to_half_pi(space, delta, tol=min(cfg.abs_tol, 1e-12))
    exponent = -n * lam * g_end
    f_end_n = comp.alpha**n * (math.exp(exponent) if exponent > -700.0 else 0.0)
    tail_val = (alpha**n - f_end_n) / n
    return scale * head_val + tail_val


# ---------------------------------------------------------------------------
# parameter search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    found: bool
    delta: float            # 0.0 when the best junction underflows a double
    log_delta: float
    alpha: float
    bound: float
    margin: float
    log_margin_gap: float   # log(gain) - log(cost); > 0 iff bound < 1/n
    evaluations: int


_ALPHA_GRID = np.exp(np.linspace(math.log(1e-4), math.log(0.9), 12))
_LOG_DELTA_GRID = np.linspace(math.log(1e-6), math.log(0.3), 16)


def _margin_grid(space: ConeSpace, alphas, log_deltas):
    n = space.n
    p = _decay_power(space)
    la = np.log(alphas)[:, None]
    ld = np.asarray(log_deltas)[None, :]
    an = np.exp(n * la)
    x = np.exp(2.0 * (ld + math.log(space.lam))) / la**2
    sin_d = np.sin(np.exp(ld))
    return (an * sin_d**p - (1.0 - an) * x / (1.0 + np.sqrt(1.0 + x))) / n


def competitor_search(space: ConeSpace, budget: int = 20000) -> SearchResult:
    """Maximize the bound's margin over the junction parameters.

    Coarse log grid with two local refinement rounds; when that finds no
    positive margin, a deep sweep pushes the junction angle toward zero in
    log space, where the margin sign is still exactly decidable even after
    the angle itself underflows.
    """
    evals = 0
    alphas = _ALPHA_GRID
    log_deltas = _LOG_DELTA_GRID
    a_step = math.log(alphas[1] / alphas[0])
    d_step = log_deltas[1] - log_deltas[0]

    best = (-math.inf, alphas[0], log_deltas[0])
    for _ in range(3):  # coarse pass + two refinement rounds
        m = _margin_grid(space, alphas, log_deltas)
        evals += m.size
        i, j = np.unravel_index(np.argmax(m), m.shape)
        if m[i, j] > best[0]:
            best = (float(m[i, j]), float(alphas[i]), float(log_deltas[j]))
        if evals >= budget:
            break
        a_step, d_step = a_step / 4.0, d_step / 4.0
        la0, ld0 = math.log(best[1]), best[2]
        alphas = np.exp(la0 + a_step * np.arange(-2, 3))
        alphas = alphas[(alphas > 0.0) & (alphas < 1.0)]
        log_deltas = ld0 + d_step * np.arange(-2, 3)
        log_deltas = log_deltas[log_deltas < math.log(HALF_PI)]

    margin, alpha, log_delta = best
    if margin > 0.0:
        delta = math.exp(log_delta)
        return SearchResult(found=True, delta=delta, log_delta=log_delta,
                            alpha=alpha, bound=exp_profile_bound(space, delta, alpha),
                            margin=margin,
                            log_margin_gap=exp_profile_log_margin(space, log_delta, alpha),
                            evaluations=evals)

    # deep sweep: push the junction angle toward zero in log space
    deep_alphas = np.concatenate([_ALPHA_GRID, np.linspace(0.3, 0.9, 7)])
    log_delta = math.log(1e-6)
    best_deep = None
    while evals < budget and log_delta > -2e6:
        log_delta *= 1.5
        for alpha in deep_alphas:
            gap = exp_profile_log_margin(space, log_delta, float(alpha))
            evals += 1
            if gap > 0.0 and (best_deep is None or gap > best_deep[0]):
                best_deep = (gap, float(alpha), log_delta)
        if best_deep is not None:
            break

    if best_deep is None:
        delta = math.exp(log_delta) if log_delta > -700.0 else 0.0
        return SearchResult(found=False, delta=math.exp(best[2]), log_delta=best[2],
                            alpha=alpha, bound=exp_profile_bound(space, math.exp(best[2]), alpha),
                            margin=margin, log_margin_gap=-math.inf, evaluations=evals)

    gap, alpha, log_delta = best_deep
    delta = math.exp(log_delta) if log_delta > -700.0 else 0.0
    if delta > 0.0:
        margin = exp_profile_margin(space, delta, alpha)
        bound = 1.0 / space.n - margin
    else:
        margin, bound = 0.0, 1.0 / space.n
    return SearchResult(found=True, delta=delta, log_delta=log_delta, alpha=alpha,
                        bound=bound, margin=margin, log_margin_gap=gap,
                        evaluations=evals)
