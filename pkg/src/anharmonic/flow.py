"""Closed-form periodic Hamilton flow for a(x, xi) = (x^(2K) + xi^(2M))^p, d = 1.

The flow through (y, eta) with c = y^(2K) + eta^(2M) > 0 is evaluated in a
single phase variable u.  With e = (K, M), tau = tau_e, and the 4*tau-periodic
extensions

    G(u) = ginv(u)            on [-tau, tau],   ginv(2*tau - u) on [tau, 3*tau]
    H(u) = h(u)               on [-tau, tau],  -h(2*tau - u)    on [tau, 3*tau]

the eta-branch (eta != 0) solution is

    u      = omega * t + g(sgn(eta) * y * c^(-1/(2K))),  omega = 2 M p c^(p - pc)
    x(t)   = sgn(eta) * c^(1/(2K)) * G(u)
    xi(t)  = sgn(eta) * c^(1/(2M)) * H(u)

and the y-branch (y != 0) uses the swapped indices (M, K):

    u      = omega' * t - g_swap(sgn(y) * eta * c^(-1/(2M))),  omega' = 2 K p c^(p - pc)
    x(t)   = sgn(y) * c^(1/(2K)) * H_swap(u)
    xi(t)  = -sgn(y) * c^(1/(2M)) * G_swap(u)

where pc = (1/K + 1/M)/2 is the critical exponent.  Both branches agree on
their common domain; this module keeps the eta-branch canonical and exposes
the y-branch for cross-checking.  The period is

    T = Gamma(1/(2K)) Gamma(1/(2M)) / (K M p Gamma(1/(2K) + 1/(2M))) * c^(pc - p),

independent of the orbit exactly when p = pc.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import special
from .exceptions import (
    DiagnosticError,
    DomainError,
    IntegrationError,
    ParameterError,
)
from .special import GExponents

__all__ = [
    "OscParams",
    "PhasePoint",
    "FlowSegment",
    "critical_exponent",
    "hamiltonian",
    "period",
    "flow",
    "trajectory",
    "segment_info",
    "ode_oracle",
    "scaling_commutation_defect",
    "flow_derivative_growth",
    "GrowthReport",
    "sigma_ray_samples",
]


@dataclass(frozen=True)
class OscParams:
    """Exponent triple (K, M, p) of the symbol (x^(2K) + xi^(2M))^p."""

    K: int
    M: int
    p: float
    cutoff_delta: float = 0.5

    def __post_init__(self):
        if not (isinstance(self.K, (int, np.integer)) and self.K >= 1):
            raise ParameterError(f"K must be a positive integer, got {self.K}")
        if not (isinstance(self.M, (int, np.integer)) and self.M >= 1):
            raise ParameterError(f"M must be a positive integer, got {self.M}")
        if self.p == 0:
            raise ParameterError("p must be nonzero")
        if self.cutoff_delta <= 0:
            raise ParameterError("cutoff_delta must be positive")

    @property
    def sigma(self) -> float:
        return self.K / self.M

    @property
    def p_crit(self) -> float:
        return 0.5 * (1.0 / self.K + 1.0 / self.M)

    @property
    def exponents(self) -> GExponents:
        return GExponents(self.K, self.M)


@dataclass(frozen=True)
class PhasePoint:
    x: float
    xi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.xi], dtype=float)


@dataclass(frozen=True)
class FlowSegment:
    """Fundamental time windows of the two solution branches through z0."""

    branch: str           # "eta" or "y"
    c: float
    period_T: float
    T1: float | None = None
    T2: float | None = None
    T3: float | None = None
    T4: float | None = None


def critical_exponent(params: OscParams) -> float:
    """p_c = (1/K + 1/M) / 2; p <= p_c is the regime of WF invariance."""
    return params.p_crit


def hamiltonian(params: OscParams, x, xi):
    """Symbol value (x^(2K) + xi^(2M))^p."""
    base = np.asarray(x, dtype=float) ** (2 * params.K) + np.asarray(xi, dtype=float) ** (
        2 * params.M
    )
    return base**params.p


def period(params: OscParams, c: float) -> float:
    """Orbit period through any z0 with x^(2K) + xi^(2M) = c (requires p > 0)."""
    if params.p <= 0:
        raise ParameterError("period requires p > 0; reverse flows are handled by flow()")
    if c <= 0:
        raise DomainError("period requires c > 0")
    K, M, p = params.K, params.M, params.p
    a, b = 0.5 / K, 0.5 / M
    coeff = special.gamma_fn(a) * special.gamma_fn(b) / (K * M * p * special.gamma_fn(a + b))
    return coeff * c ** (params.p_crit - p)


def _wrap_phase(u, t_quarter: float):
    """Reduce the phase into the fundamental window [-tau, 3*tau)."""
    return (np.asarray(u, dtype=float) + t_quarter) % (4.0 * t_quarter) - t_quarter


def _periodic_g_inverse(e: GExponents, u):
    t = special.tau(e)
    w = _wrap_phase(u, t)
    arg = np.where(w <= t, w, 2.0 * t - w)
    return np.asarray(special.g_inverse(e, arg), dtype=float)


def _periodic_h(e: GExponents, u):
    t = special.tau(e)
    w = _wrap_phase(u, t)
    first = w <= t
    arg = np.where(first, w, 2.0 * t - w)
    vals = np.asarray(special.h_fn(e, arg), dtype=float)
    return np.where(first, vals, -vals)


def _flow_arrays(params: OscParams, t, y: float, eta: float, branch: str):
    K, M, p = params.K, params.M, params.p
    c = y ** (2 * K) + eta ** (2 * M)
    ta = np.asarray(t, dtype=float)
    if c == 0.0:
        return np.zeros_like(ta), np.zeros_like(ta)

    rate_exp = p - 0.5 / M - 0.5 / K
    if branch == "auto":
        branch = "eta" if eta != 0.0 else "y"
    if branch == "eta":
        if eta == 0.0:
            raise ParameterError("eta-branch requires eta != 0")
        e = params.exponents
        s = np.sign(eta)
        omega = 2.0 * M * p * c**rate_exp
        u0 = special.g_km(e, s * y * c ** (-0.5 / K))
        u = omega * ta + u0
        x = s * c ** (0.5 / K) * _periodic_g_inverse(e, u)
        xi = s * c ** (0.5 / M) * _periodic_h(e, u)
    elif branch == "y":
        if y == 0.0:
            raise ParameterError("y-branch requires y != 0")
        e = params.exponents.swapped
        s = np.sign(y)
        omega = 2.0 * K * p * c**rate_exp
        u0 = special.g_km(e, s * eta * c ** (-0.5 / M))
        u = omega * ta - u0
        x = s * c ** (0.5 / K) * _periodic_h(e, u)
        xi = -s * c ** (0.5 / M) * _periodic_g_inverse(e, u)
    else:
        raise ParameterError(f"unknown branch {branch!r}")
    return x, xi


def flow(params: OscParams, t: float, z0: PhasePoint, branch: str = "auto") -> PhasePoint:
    """Evaluate the Hamilton flow chi_t(z0).

    The origin is the unique fixed point.  For z0 off the axes both branch
    formulas apply and agree; "auto" prefers the eta-branch.
    """
    x, xi = _flow_arrays(params, t, z0.x, z0.xi, branch)
    return PhasePoint(float(x), float(xi))


def trajectory(params: OscParams, times, z0: PhasePoint, branch: str = "auto") -> np.ndarray:
    """Flow sampled at an array of times; returns shape (len(times), 2)."""
    x, xi = _flow_arrays(params, np.asarray(times, dtype=float), z0.x, z0.xi, branch)
    return np.stack([x, xi], axis=-1)


def segment_info(params: OscParams, z0: PhasePoint) -> FlowSegment:
    """Fundamental window endpoints T1..T4 and the period for the orbit of z0."""
    K, M, p = params.K, params.M, params.p
    y, eta = z0.x, z0.xi
    c = y ** (2 * K) + eta ** (2 * M)
    if c == 0.0:
        raise DomainError("segment_info requires z0 != 0")
    pref = c ** (0.5 / M + 0.5 / K - p)
    seg = {}
    e = params.exponents
    if eta != 0.0:
        t_q = special.tau(e)
        s0 = special.g_km(e, np.sign(eta) * y * c ** (-0.5 / K))
        seg["T1"] = (-t_q - s0) * pref / (2.0 * M * p)
        seg["T2"] = (t_q - s0) * pref / (2.0 * M * p)
        branch = "eta"
        T = 2.0 * (seg["T2"] - seg["T1"])
    if y != 0.0:
        es = e.swapped
        t_q = special.tau(es)
        s1 = special.g_km(es, np.sign(y) * eta * c ** (-0.5 / M))
        seg["T3"] = (-t_q + s1) * pref / (2.0 * K * p)
        seg["T4"] = (t_q + s1) * pref / (2.0 * K * p)
        if eta == 0.0:
            branch = "y"
            T = 2.0 * (seg["T4"] - seg["T3"])
    return FlowSegment(branch=branch, c=c, period_T=abs(T), **seg)


def _hamilton_field(params: OscParams):
    K, M, p = params.K, params.M, params.p

    def field(_t, z):
        x, xi = z
        base = x ** (2 * K) + xi ** (2 * M)
        fac = p * base ** (p - 1.0)
        return [2.0 * M * fac * xi ** (2 * M - 1), -2.0 * K * fac * x ** (2 * K - 1)]

    return field


def ode_oracle(
    params: OscParams,
    t: float,
    z0: PhasePoint,
    tol: float = 1e-9,
    times: Sequence[float] | None = None,
) -> PhasePoint | np.ndarray:
    """Adaptive Runge-Kutta integration of the Hamilton system.

    Independent of the closed form: integrates x' = grad_xi a, xi' = -grad_x a
    directly.  For non-integer p the symbol carries a smooth cutoff near the
    origin; orbits are required to stay outside the ball of radius
    cutoff_delta, where the cutoff is identically one and the field is
    unchanged (checked on the computed trajectory).
    """
    if z0.x == 0.0 and z0.xi == 0.0:
        raise DomainError("ode_oracle requires z0 != 0")
    if not np.isfinite(t):
        raise DomainError("ode_oracle requires finite t")
    t_eval = None if times is None else np.asarray(times, dtype=float)
    scale = max(abs(z0.x), abs(z0.xi), 1.0)
    sol = solve_ivp(
        _hamilton_field(params),
        (0.0, t),
        [z0.x, z0.xi],
        method="DOP853",
        rtol=tol,
        atol=tol * scale,
        t_eval=t_eval,
        dense_output=False,
    )
    if not sol.success:
        raise IntegrationError(f"ODE integration failed: {sol.message}")
    radii = np.hypot(sol.y[0], sol.y[1])
    if params.p != int(params.p) and np.min(radii) <= params.cutoff_delta:
        raise IntegrationError(
            "orbit entered the cutoff ball (min |z| = "
            f"{np.min(radii):.3g} <= delta = {params.cutoff_delta}); "
            "the smoothed symbol differs there"
        )
    if times is None:
        return PhasePoint(float(sol.y[0, -1]), float(sol.y[1, -1]))
    return sol.y.T


def scaling_commutation_defect(
    params: OscParams, t: float, z0: PhasePoint, lam: float
) -> float:
    """Defect of chi_t against the anisotropic scaling (y,eta) -> (lam y, lam^sigma eta).

    Zero (up to inversion tolerance) exactly when p = p_c.  Measured in the
    weighted metric max(|dx|, |dxi|^(1/sigma)).
    """
    if lam <= 0:
        raise ParameterError("lam must be positive")
    sigma = params.sigma
    scaled = PhasePoint(lam * z0.x, lam**sigma * z0.xi)
    lhs = flow(params, t, scaled)
    base = flow(params, t, z0)
    rhs = PhasePoint(lam * base.x, lam**sigma * base.xi)
    return float(max(abs(lhs.x - rhs.x), abs(lhs.xi - rhs.xi) ** (1.0 / sigma)))


def _theta(sigma: float, x, xi):
    return 1.0 + np.abs(x) + np.abs(xi) ** (1.0 / sigma)


def sigma_ray_samples(
    params: OscParams,
    lambdas: Iterable[float],
    directions: Iterable[tuple] = ((1.0, 0.7), (0.6, 1.0), (1.0, -1.0), (-0.8, 0.9)),
) -> list:
    """Phase points (lam * x0, lam^sigma * xi0) spanning decades of theta."""
    sigma = params.sigma
    pts = []
    for lam in lambdas:
        for x0, xi0 in directions:
            pts.append(PhasePoint(lam * x0, lam**sigma * xi0))
    return pts


@dataclass
class GrowthReport:
    """Log-log growth fit of flow derivatives against theta_sigma."""

    alpha: int
    beta: int
    fitted_x: float
    fitted_xi: float
    bound_x: float
    bound_xi: float
    theta_values: np.ndarray
    magnitudes_x: np.ndarray
    magnitudes_xi: np.ndarray


def _fd_map_derivative(params, t, z, alpha, beta, rel_step):
    """Central finite differences of the time-t flow map in (y, eta)."""
    sigma = params.sigma
    th = _theta(sigma, z.x, z.xi)
    hy = rel_step * th
    he = rel_step * th**sigma

    def F(dy, de):
        return flow(params, t, PhasePoint(z.x + dy, z.xi + de)).as_array()

    if (alpha, beta) == (0, 0):
        return np.abs(F(0.0, 0.0))
    if (alpha, beta) == (1, 0):
        return np.abs(F(hy, 0) - F(-hy, 0)) / (2 * hy)
    if (alpha, beta) == (0, 1):
        return np.abs(F(0, he) - F(0, -he)) / (2 * he)
    if (alpha, beta) == (2, 0):
        return np.abs(F(hy, 0) - 2 * F(0, 0) + F(-hy, 0)) / hy**2
    if (alpha, beta) == (0, 2):
        return np.abs(F(0, he) - 2 * F(0, 0) + F(0, -he)) / he**2
    if (alpha, beta) == (1, 1):
        return np.abs(F(hy, he) - F(hy, -he) - F(-hy, he) + F(-hy, -he)) / (4 * hy * he)
    raise ParameterError("flow_derivative_growth supports alpha + beta <= 2")


def flow_derivative_growth(
    params: OscParams,
    t: float,
    region_samples: Sequence[PhasePoint],
    alpha: int,
    beta: int,
    rel_step: float | None = None,
) -> GrowthReport:
    """Fit the growth exponent of |d^alpha_y d^beta_eta chi_t| against theta_sigma.

    Samples are binned into dyadic theta shells and the shellwise maximum is
    fitted, mirroring the sup in the derivative bounds.  Requires at least
    two decades of theta range.
    """
    if alpha + beta > 2:
        raise ParameterError("orders alpha + beta <= 2 supported")
    if rel_step is None:
        rel_step = 1e-5 if alpha + beta <= 1 else 5e-4
    sigma = params.sigma
    thetas = np.array([_theta(sigma, z.x, z.xi) for z in region_samples])
    if thetas.max() / thetas.min() < 100.0:
        raise DiagnosticError("samples span fewer than two decades of theta_sigma")

    mags = np.array(
        [_fd_map_derivative(params, t, z, alpha, beta, rel_step) for z in region_samples]
    )
    shells = np.floor(np.log2(thetas)).astype(int)
    centers, mx, mxi = [], [], []
    for s in np.unique(shells):
        sel = shells == s
        centers.append(2.0**s * 1.5)
        mx.append(mags[sel, 0].max())
        mxi.append(mags[sel, 1].max())
    centers = np.array(centers)
    mx = np.maximum(np.array(mx), 1e-300)
    mxi = np.maximum(np.array(mxi), 1e-300)
    fit_x = np.polyfit(np.log(centers), np.log(mx), 1)[0]
    fit_xi = np.polyfit(np.log(centers), np.log(mxi), 1)[0]

    grow = 2 * params.K * max(params.p - params.p_crit, 0.0) * (alpha + beta)
    bound_x = grow + 1.0 - alpha - sigma * beta
    bound_xi = grow + sigma - alpha - sigma * beta
    return GrowthReport(
        alpha=alpha,
        beta=beta,
        fitted_x=float(fit_x),
        fitted_xi=float(fit_xi),
        bound_x=bound_x,
        bound_xi=bound_xi,
        theta_values=thetas,
        magnitudes_x=mags[:, 0],
        magnitudes_xi=mags[:, 1],
    )
