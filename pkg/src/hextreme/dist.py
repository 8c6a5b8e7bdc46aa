"""Distribution layer for the six-parameter family.

Density, CDF, quantiles, sampling, moments, characteristic function,
entropy, KL divergence, mode/shape analysis, sub-model constructors,
exponential-family representation and finite mixtures. CDF-related work is
funneled through a per-parameter panel integrator (geometric panels with
16-point Gauss-Legendre each, plus an analytic head correction at the
origin) so repeated CDF/quantile evaluation stays vectorized and cheap.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.integrate import quad

from . import hfunc
from .hfunc import HValue, h_full, log_kernel, _pow
from .params import ParamVector, as_theta
from .specfun import DomainError, NumericError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class _Evaluator:
    """Panel-based CDF/expectation machinery for one parameter vector."""

    N_PANELS = 384

    def __init__(self, theta: ParamVector):
        self.theta = theta
        self.log_norm = h_full(theta).log_value

        grid = np.geomspace(1e-20, 1e20, 800)
        lk = log_kernel(grid, theta)
        finite = np.isfinite(lk)
        if not np.any(finite):
            raise NumericError("kernel not representable on the probe grid")
        self.peak = float(lk[finite].max())
        # threshold on y * kernel(y), a local-mass proxy on a log grid, so that
        # integrable singularities at the origin do not swamp the tail cut
        proxy = lk + np.log(grid)
        proxy_peak = float(proxy[finite].max())
        keep = finite & (proxy >= proxy_peak + math.log(1e-18))
        idx = np.nonzero(keep)[0]
        lo = grid[max(idx[0] - 1, 0)]
        hi = grid[min(idx[-1] + 1, grid.size - 1)]

        # analytic head when the kernel behaves like C*y^t6 down to y = 0
        self.head = 0.0
        self.a = lo
        if idx[0] == 0 and theta.t6 > -1:
            ka = math.exp(float(lk[0]) - self.peak)
            self.head = ka * grid[0] / (theta.t6 + 1)
            self.a = grid[0]

        edges = np.geomspace(self.a, hi, self.N_PANELS + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        ys = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        kv = np.exp(np.nan_to_num(log_kernel(ys, theta) - self.peak, nan=-np.inf,
                                  neginf=-np.inf))
        self.edges = edges
        panel = (kv * _GL_WEIGHTS[None, :]).sum(axis=1) * half
        self.cum = np.concatenate(([0.0], np.cumsum(panel)))
        self.total = self.head + float(self.cum[-1])
        if not self.total > 0:
            raise NumericError("panel integration of the kernel collapsed to zero")
        # sanity against the H-function authority
        rel = abs(math.expm1(math.log(self.total) + self.peak - self.log_norm))
        if rel > 1e-5:
            raise NumericError(f"panel normalizer disagrees with H-function ({rel:.2e})")

    def _partial_scaled(self, xs: np.ndarray) -> np.ndarray:
        """Scaled kernel integral from 0 to each x (xs within [a, hi])."""
        idx = np.searchsorted(self.edges, xs, side="right") - 1
        idx = np.clip(idx, 0, self.N_PANELS - 1)
        left = self.edges[idx]
        half = 0.5 * (xs - left)
        ys = left[:, None] + half[:, None] * (_GL_NODES[None, :] + 1.0)
        kv = np.exp(np.nan_to_num(log_kernel(np.maximum(ys, 1e-300), self.theta)
                                  - self.peak, nan=-np.inf, neginf=-np.inf))
        part = (kv * _GL_WEIGHTS[None, :]).sum(axis=1) * half
        return self.head + self.cum[idx] + part

    def cdf_many(self, xs) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.empty_like(xs)
        below = xs <= self.a
        above = xs >= self.edges[-1]
        mid = ~(below | above)
        if self.head > 0:
            t6 = self.theta.t6
            out[below] = self.head * (np.maximum(xs[below], 0.0) / self.a) ** (t6 + 1)
        else:
            out[below] = 0.0
        out[above] = self.total
        if np.any(mid):
            out[mid] = self._partial_scaled(xs[mid])
        return np.clip(out / self.total, 0.0, 1.0)

    def quantile_many(self, ps) -> np.ndarray:
        ps = np.atleast_1d(np.asarray(ps, dtype=float))
        if np.any((ps <= 0) | (ps >= 1)):
            raise DomainError("quantile requires probabilities in (0, 1)")
        lo = np.full_like(ps, math.log(self.a))
        hi = np.full_like(ps, math.log(self.edges[-1]))
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            f = self.cdf_many(np.exp(mid))
            high = f >= ps
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
        out = np.exp(0.5 * (lo + hi))
        if self.head > 0:
            # invert the power-law head analytically below the panel range
            in_head = ps < self.head / self.total
            if np.any(in_head):
                t6 = self.theta.t6
                out[in_head] = self.a * (ps[in_head] * self.total / self.head) ** (
                    1.0 / (t6 + 1)
                )
        return out

    def expect(self, f) -> float:
        """E[f(Y)] by reusing the panel decomposition."""
        edges = self.edges
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        ys = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        kv = np.exp(np.nan_to_num(log_kernel(ys, self.theta) - self.peak,
                                  nan=-np.inf, neginf=-np.inf))
        fv = np.nan_to_num(np.asarray(f(ys), dtype=float), nan=0.0)
        val = float((kv * fv * _GL_WEIGHTS[None, :] * half[:, None]).sum())
        if self.head > 0:
            # head region: substitute y = a u^(1/(t6+1)) so the head measure
            # becomes uniform in u on (0, 1), then panel-integrate f
            p = self.theta.t6 + 1
            ue = np.geomspace(1e-30, 1.0, 129)
            um = 0.5 * (ue[1:] + ue[:-1])
            uh = 0.5 * (ue[1:] - ue[:-1])
            us = um[:, None] + uh[:, None] * _GL_NODES[None, :]
            yh = self.a * us ** (1.0 / p)
            fh = np.nan_to_num(np.asarray(f(yh), dtype=float), nan=0.0)
            val += self.head * float((fh * _GL_WEIGHTS[None, :] * uh[:, None]).sum())
        return val / self.total


@functools.lru_cache(maxsize=48)
def _evaluator_cached(key: tuple[float, ...]) -> _Evaluator:
    return _Evaluator(ParamVector(*key))


def _evaluator(theta) -> _Evaluator:
    th = as_theta(theta).require_valid()
    return _evaluator_cached(th.as_tuple())


# ---------------------------------------------------------------------------
# core distribution functions


def log_pdf(y, theta):
    """log density, computed in log space to avoid underflow."""
    th = as_theta(theta).require_valid()
    out = log_kernel(y, th) - h_full(th).log_value
    return float(out) if np.ndim(out) == 0 else out


def pdf(y, theta):
    """Density at y > 0."""
    with np.errstate(over="ignore"):
        out = np.exp(log_pdf(y, theta))
    return out


def cdf(x, theta):
    """Distribution function at x > 0."""
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("cdf requires x > 0")
    out = _evaluator(theta).cdf_many(xs)
    return float(out[0]) if scalar else out


def quantile(p, theta):
    """Inverse CDF; |cdf(result) - p| <= 1e-10."""
    scalar = np.ndim(p) == 0
    out = _evaluator(theta).quantile_many(np.atleast_1d(np.asarray(p, dtype=float)))
    return float(out[0]) if scalar else out


def sample(n: int, theta, seed: int) -> np.ndarray:
    """n i.i.d. inverse-transform draws, deterministic per seed."""
    if n < 1:
        raise DomainError("sample requires n >= 1")
    rng = np.random.default_rng(seed)
    u = rng.uniform(1e-12, 1.0 - 1e-12, size=n)
    return _evaluator(theta).quantile_many(u)


def moment(r: float, theta) -> float:
    """E[Y^r] = H(t6 + r) / H(t6)."""
    th = as_theta(theta).require_valid()
    shifted = ParamVector(th.t1, th.t2, th.t3, th.t4, th.t5, th.t6 + r)
    ok, why = shifted.validity()
    if not ok:
        raise DomainError(f"moment of order {r} does not exist: {why}")
    return math.exp(h_full(shifted).log_value - h_full(th).log_value)


def mellin(s: float, theta) -> float:
    """Mellin transform of the density at s, i.e. E[Y^(s-1)]."""
    return moment(s - 1.0, theta)


def char_fn(t: float, theta) -> complex:
    """Characteristic function E[exp(itY)] via split oscillatory quadrature."""
    th = as_theta(theta).require_valid()
    if t == 0:
        return complex(1.0, 0.0)
    ev = _evaluator(th)
    mean = ev.expect(lambda y: y)
    if abs(t) * mean > 1e3:
        raise NumericError("char_fn t outside the supported envelope |t| E[Y] <= 1e3")

    from scipy.integrate import tanhsinh

    def fv(y):
        y = np.maximum(np.asarray(y, dtype=float), 1e-300)
        return np.exp(np.nan_to_num(log_kernel(y, th) - ev.peak, nan=-np.inf,
                                    posinf=700.0))

    # non-oscillatory stretch (under a tenth of a period, covers any origin
    # singularity) by tanh-sinh, oscillatory remainder by the qawo rule
    b = float(ev.edges[-1])
    at = abs(t)
    s = min(0.1 / at, b)
    re = float(tanhsinh(lambda y: fv(y) * np.cos(at * y), 0.0, s).integral)
    im = float(tanhsinh(lambda y: fv(y) * np.sin(at * y), 0.0, s).integral)
    if s < b:
        def f(y):
            return float(fv(y))

        re += quad(f, s, b, weight="cos", wvar=at, limit=400)[0]
        im += quad(f, s, b, weight="sin", wvar=at, limit=400)[0]
    return complex(re / ev.total, math.copysign(im / ev.total, t))


def xi_log_moment(theta):
    """E[log Y] with the H-ratio bounds; raises if the bounds are violated."""
    th = as_theta(theta).require_valid()
    ev = _evaluator(th)
    xi = ev.expect(np.log)
    upper = moment(1.0, th) - 1.0
    shifted = ParamVector(th.t1, th.t2, th.t3, th.t4, th.t5, th.t6 - 1.0)
    if shifted.is_valid:
        lower = 1.0 - math.exp(h_full(shifted).log_value - h_full(th).log_value)
    else:
        lower = -math.inf
    if not (lower - 1e-9 < xi <= upper + 1e-9):
        raise NumericError(f"log-moment {xi} violates bounds ({lower}, {upper}]")
    return xi, (lower, upper)


def entropy(theta, method: str = "auto") -> float:
    """Differential entropy.

    For natural t5 with t1 > 0 the four-piece decomposition with series
    closed forms is used when it converges; otherwise the entropy is taken
    as -E[log g] under the panel integrator.
    """
    th = as_theta(theta).require_valid()
    log_norm = h_full(th).log_value
    if method not in ("auto", "series", "numeric"):
        raise DomainError(f"unknown entropy method {method!r}")
    if method in ("auto", "series") and th.theta5_natural and th.t1 > 0 and th.t3 >= 0:
        try:
            return _entropy_series(th, log_norm)
        except NumericError:
            if method == "series":
                raise
    elif method == "series":
        raise DomainError("series entropy requires natural t5 with t1 > 0")
    return _entropy_numeric(th, log_norm)


def _entropy_series(th: ParamVector, log_norm: float) -> float:
    t1, t2, t3, t4, t5, t6 = th.as_tuple()
    m = int(t5)
    c = math.exp(log_norm)
    i1 = log_norm
    i2 = -t6 / c * hfunc._dlog_moment_series(th, t6)
    i3 = t1 * math.exp(
        h_full(ParamVector(t1, t2, t3, t4, t5, t6 + 1)).log_value - log_norm
    )
    i4 = sum(
        math.comb(m, k) * t2**k * t4 ** (m - k)
        * math.exp(h_full(ParamVector(t1, t2, t3, t4, t5, t6 + t3 * k)).log_value - log_norm)
        for k in range(m + 1)
        if math.comb(m, k) * t2**k * t4 ** (m - k) != 0
    )
    return i1 + i2 + i3 + i4


def _entropy_numeric(th: ParamVector, log_norm: float) -> float:
    ev = _evaluator(th)
    t1, t2, t3, t4, t5, t6 = th.as_tuple()

    def power_term(y):
        return _pow(t2 * np.power(y, t3) + t4, t5)

    return (
        log_norm
        - t6 * ev.expect(np.log)
        + t1 * ev.expect(lambda y: y)
        + ev.expect(power_term)
    )


def kl_divergence(theta, theta_prime) -> float:
    """KL divergence between family members sharing (t2, t3, t4, t5)."""
    th = as_theta(theta).require_valid()
    tp = as_theta(theta_prime).require_valid()
    if (th.t2, th.t3, th.t4, th.t5) != (tp.t2, tp.t3, tp.t4, tp.t5):
        raise DomainError("kl_divergence requires matching (t2, t3, t4, t5)")
    xi, _ = xi_log_moment(th)
    val = (
        h_full(tp).log_value
        - h_full(th).log_value
        + (th.t6 - tp.t6) * xi
        + (tp.t1 - th.t1) * moment(1.0, th)
    )
    if val < -1e-9:
        raise NumericError(f"KL divergence evaluated negative: {val}")
    return val


def cross_entropy(theta, theta_prime) -> float:
    """H(g, g') = D_KL(g || g') + h(Y); exposed as the one-line identity."""
    return kl_divergence(theta, theta_prime) + entropy(theta)


# ---------------------------------------------------------------------------
# mode and shape


@dataclass(frozen=True)
class ShapeReport:
    shape_class: str
    critical_points: tuple[float, ...]


def _critical_residual(y, th: ParamVector):
    t1, t2, t3, t4, t5, t6 = th.as_tuple()
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        base = t2 * np.power(y, t3) + t4
        rhs = t2 * t3 * t5 * _pow(base, t5 - 1) * np.power(y, t3)
    return t6 - t1 * y - rhs


def shape_classify(theta) -> ShapeReport:
    """Solve the critical-point equation and classify the density shape."""
    th = as_theta(theta).require_valid()
    t1, t2, t3, t4, t5, t6 = th.as_tuple()

    if (t2 == 0 or t3 == 0 or t5 == 0) and t1 > 0:
        if t6 > 0:
            return ShapeReport("unimodal", (t6 / t1,))
        return ShapeReport("strictly_decreasing", ())

    ev = _evaluator(th)
    lo = float(ev.quantile_many(np.array([1e-6]))[0])
    hi = float(ev.quantile_many(np.array([1 - 1e-6]))[0])
    grid = np.geomspace(lo, hi, 512)
    res = _critical_residual(grid, th)
    good = np.isfinite(res)
    grid, res = grid[good], res[good]
    roots = []
    sign = np.sign(res)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    from scipy.optimize import brentq

    for i in flips:
        r = brentq(lambda y: float(_critical_residual(y, th)), grid[i], grid[i + 1],
                   xtol=1e-300, rtol=1e-15)
        roots.append(float(r))
    roots = sorted(roots)

    if len(roots) == 0:
        cls = "strictly_decreasing" if res.size and res[0] < 0 else "no_interior_critical_point"
    elif len(roots) == 1:
        # residual has the sign of g'; + -> - means a mode
        cls = "unimodal" if res[0] > 0 else "no_interior_critical_point"
    elif len(roots) == 2:
        cls = "decreasing_increasing_decreasing"
    else:
        raise NumericError(f"unexpected critical point count {len(roots)}")
    return ShapeReport(cls, tuple(roots))


def lagrange_mode_series(theta, terms: int) -> float:
    """Series inversion of the critical-point equation around t6/t1.

    Valid for t1 > 0, t6 > 0; raises on detected divergence (growing terms).
    """
    th = as_theta(theta).require_valid()
    t1, t2, t3, t4, t5, t6 = th.as_tuple()
    if not (t1 > 0 and t6 > 0):
        raise DomainError("lagrange_mode_series requires t1 > 0 and t6 > 0")
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if t2 == 0 or t3 == 0 or t5 == 0:
        return t6 / t1

    import mpmath as mp

    chi = mp.mpf(t6) / mp.mpf(t1)
    delta = -mp.mpf(t2) * t3 * t5 / t1

    def phi(x):
        return (t2 * x**mp.mpf(t3) + t4) ** mp.mpf(t5 - 1) * x**mp.mpf(t3)

    with mp.workdps(50):
        total = chi
        prev_mag = None
        grow_run = 0
        for n in range(1, terms + 1):
            dn = mp.diff(lambda x: phi(x) ** n, chi, n - 1)
            term = delta**n / mp.factorial(n) * dn
            mag = abs(term)
            # two consecutive strict magnitude increases signal divergence
            # (single flukes happen where a derivative vanishes identically)
            if prev_mag is not None and mag > prev_mag and n >= 3:
                grow_run += 1
                if grow_run >= 2:
                    raise NumericError(f"inversion series diverging at term {n}")
            else:
                grow_run = 0
            prev_mag = mag
            total += term
        return float(total)


# ---------------------------------------------------------------------------
# sub-models (particular cases)

SUBMODEL_KINDS = (
    "gamma", "generalized_gamma", "inverse_gamma", "weibull", "frechet",
    "half_normal", "modified_half_normal", "rayleigh", "erlang", "exponential",
)


@dataclass(frozen=True)
class SubModel:
    kind: str
    params: dict

    def __post_init__(self):
        if self.kind not in SUBMODEL_KINDS:
            raise DomainError(f"unknown sub-model kind {self.kind!r}")


def from_submodel(sub: SubModel) -> ParamVector:
    """Parameter vector of the family member equal to the given sub-model."""
    k, p = sub.kind, sub.params

    def need(*names):
        missing = [n for n in names if n not in p]
        if missing:
            raise DomainError(f"{k} sub-model missing parameters {missing}")
        return [float(p[n]) for n in names]

    if k == "gamma":
        alpha, beta = need("alpha", "beta")
        _positive(alpha=alpha, beta=beta)
        return ParamVector(beta, 0.0, 1.0, 0.0, 1.0, alpha - 1)
    if k == "generalized_gamma":
        alpha, beta, gamma = need("alpha", "beta", "gamma")
        _positive(alpha=alpha, beta=beta, gamma=gamma)
        return ParamVector(0.0, beta, gamma, 0.0, 1.0, alpha - 1)
    if k == "inverse_gamma":
        alpha, beta = need("alpha", "beta")
        _positive(alpha=alpha, beta=beta)
        return ParamVector(0.0, beta, -1.0, 0.0, 1.0, -alpha - 1)
    if k == "weibull":
        alpha, sigma = need("alpha", "sigma")
        _positive(alpha=alpha, sigma=sigma)
        return ParamVector(0.0, 1.0 / sigma, 1.0, 0.0, alpha, alpha - 1)
    if k == "frechet":
        alpha, sigma = need("alpha", "sigma")
        _positive(alpha=alpha, sigma=sigma)
        return ParamVector(0.0, 1.0 / sigma, 1.0, 0.0, -alpha, -alpha - 1)
    if k == "half_normal":
        (sigma,) = need("sigma")
        _positive(sigma=sigma)
        return ParamVector(0.0, 1.0 / (2 * sigma**2), 2.0, 0.0, 1.0, 0.0)
    if k == "modified_half_normal":
        alpha, beta, gamma = need("alpha", "beta", "gamma")
        _positive(alpha=alpha, beta=beta)
        if not gamma < 0:
            raise DomainError("modified_half_normal requires gamma < 0")
        return ParamVector(-gamma, beta, 2.0, 0.0, 1.0, alpha - 1)
    if k == "rayleigh":
        (sigma,) = need("sigma")
        _positive(sigma=sigma)
        return ParamVector(0.0, 1.0 / (2 * sigma**2), 2.0, 0.0, 1.0, 1.0)
    if k == "erlang":
        kk, beta = need("k", "beta")
        _positive(beta=beta)
        if not (kk >= 1 and float(kk).is_integer()):
            raise DomainError("erlang requires integer k >= 1")
        return ParamVector(beta, 0.0, 1.0, 1.0, 1.0, kk - 1)
    if k == "exponential":
        (lam,) = need("rate")
        _positive(rate=lam)
        return ParamVector(lam, 0.0, 1.0, 0.0, 1.0, 0.0)
    raise DomainError(f"unknown sub-model kind {k!r}")


def _positive(**kwargs):
    for name, val in kwargs.items():
        if not val > 0:
            raise DomainError(f"sub-model parameter {name} must be positive, got {val}")


# ---------------------------------------------------------------------------
# exponential family representation


def exp_family_rep(theta):
    """Natural parameters (a_0..a_{m+2}) and log-normalizer b for t3 = 1, t5 = m.

    Sufficient statistics are T_j(y) = y^j for j <= m, then y, then log y;
    log g(y) = sum_j a_j T_j(y) + b.
    """
    th = as_theta(theta).require_valid()
    if th.t3 != 1 or not th.theta5_natural:
        raise DomainError("exp_family_rep requires t3 = 1 and natural t5")
    m = int(th.t5)
    a = np.empty(m + 3)
    for j in range(m + 1):
        a[j] = -math.comb(m, j) * th.t2**j * th.t4 ** (m - j)
    a[m + 1] = -th.t1
    a[m + 2] = th.t6
    b = -h_full(th).log_value
    return a, b


# ---------------------------------------------------------------------------
# finite mixtures


@dataclass(frozen=True)
class MixtureModel:
    components: tuple[tuple[float, ParamVector], ...]
    allow_signed: bool = False

    def __post_init__(self):
        ws = [w for w, _ in self.components]
        if abs(sum(ws) - 1.0) > 1e-12:
            raise DomainError(f"mixture weights sum to {sum(ws)}, expected 1")
        if not self.allow_signed and any(w < 0 for w in ws):
            raise DomainError("negative mixture weights require allow_signed=True")
        for _, th in self.components:
            as_theta(th).require_valid()


def mixture_pdf(mix: MixtureModel, y):
    out = 0.0
    for w, th in mix.components:
        out = out + w * pdf(y, th)
    return out


# ---------------------------------------------------------------------------
# stochastic-representation identity and Gumbel limit


def stochastic_representation_cdf(y: float, theta, max_terms: int = 120) -> float:
    """CDF via the signed gamma-mixture series; a formal identity check.

    (1/c) sum_k (-1)^k/k! E[(t2 Z^t3 + t4)^(k t5) 1{Z <= y}] with
    Z ~ Gamma(t6+1, rate t1); requires natural t5, t1 > 0, t3 > 0.
    """
    th = as_theta(theta).require_valid()
    t1, t2, t3, t4, t5, t6 = th.as_tuple()
    if not (th.theta5_natural and t1 > 0 and t3 > 0):
        raise DomainError("stochastic representation needs natural t5, t1 > 0, t3 > 0")
    m = int(t5)
    log_norm = h_full(th).log_value
    total = 0.0
    small = 0
    for k in range(max_terms):
        km = k * m
        js = np.arange(km + 1)
        if t4 == 0:
            js = js[-1:]
        if t2 == 0:
            js = js[:1]
        aj = t6 + 1 + t3 * js
        # E[Z^p 1{Z<=y}] = Gamma(a+p)/(Gamma(a) t1^p) P(a+p, t1 y) for Gamma(a, t1)
        with np.errstate(divide="ignore"):
            log_terms = (
                sp.gammaln(km + 1) - sp.gammaln(js + 1) - sp.gammaln(km - js + 1)
                + np.where(js > 0, js * math.log(t2) if t2 > 0 else 0.0, 0.0)
                + np.where(km - js > 0, (km - js) * math.log(t4) if t4 > 0 else 0.0, 0.0)
                + sp.gammaln(aj) - aj * math.log(t1)
                + np.log(sp.gammainc(aj, t1 * y))
            )
        inner = float(np.exp(log_terms - log_norm).sum())
        term = ((-1.0) ** k) / math.factorial(k) * inner * math.exp(0.0)
        total += term
        if abs(term) < 1e-12 * max(abs(total), 1e-12):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    else:
        raise NumericError("stochastic-representation series did not converge")
    return total


def gumbel_limit_check(alpha: float, beta: float, n: int, grid_size: int = 201) -> float:
    """Sup-norm gap between the finite-n kernel approximation and the Gumbel PDF.

    Uses theta = (1/beta, -1/(beta n), 1, 1 + alpha/(beta n), n, 0) with even n,
    over a fixed positive grid; decreasing in n.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    if n % 2 != 0 or n < 4:
        raise DomainError("n must be an even integer >= 4")
    lo = max(1e-6, alpha - 3 * beta)
    ys = np.linspace(lo, alpha + 8 * beta, grid_size)
    z = (ys - alpha) / beta
    gumbel = np.exp(-z - np.exp(-z)) / beta
    base = 1.0 + alpha / (beta * n) - ys / (beta * n)
    with np.errstate(over="ignore"):
        powed = np.power(base, n)
    if not np.all(np.isfinite(powed)):
        raise NumericError("(1 + z/n)^n overflowed on the comparison grid")
    approx = np.exp(alpha / beta) * np.exp(-ys / beta - powed) / beta
    return float(np.max(np.abs(approx - gumbel)))
