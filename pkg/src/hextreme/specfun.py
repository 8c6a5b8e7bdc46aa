"""Scalar special functions and generalized Gauss-Laguerre quadrature rules.

All higher layers consume these. The gamma-family scalars wrap scipy.special
behind explicit domain checks; the quadrature rules are built here (Golub-Welsch
on the symmetric Jacobi matrix, one Newton polish per root, weights from the
classical generalized-Laguerre formula evaluated in log space).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.linalg import eigh_tridiagonal


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(RuntimeError):
    """A numerical procedure failed to converge or produced a non-finite result."""


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return float(sp.gammaln(x))


def digamma(x: float) -> float:
    """Psi(x) = d/dx log Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(sp.digamma(x))


def incomplete_gamma_lower(p: float, x: float) -> float:
    """Lower incomplete gamma gamma(p, x) = int_0^x w^(p-1) e^-w dw."""
    if not p > 0:
        raise DomainError(f"incomplete_gamma_lower requires p > 0, got {p}")
    if x < 0:
        raise DomainError(f"incomplete_gamma_lower requires x >= 0, got {x}")
    # sp.gammainc is the regularized form gamma(p, x) / Gamma(p)
    return float(sp.gammainc(p, x) * np.exp(sp.gammaln(p)))


def laguerre_eval(n: int, alpha: float, x) -> float | np.ndarray:
    """Generalized Laguerre polynomial L_n^(alpha)(x) by three-term recurrence."""
    if n < 0:
        raise DomainError("laguerre_eval requires n >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _laguerre_scaled(n: int, alpha: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(sign, log|L_n^(alpha)(x)|) via a rescaled three-term recurrence.

    The plain recurrence overflows for large n at large nodes; this carries a
    per-node log scale factor instead.
    """
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    scale = np.zeros_like(x)
    if n == 0:
        return np.sign(prev), scale
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        mag = np.abs(cur)
        big = mag > 1e150
        if np.any(big):
            s = np.where(big, mag, 1.0)
            cur = cur / s
            prev = prev / s
            scale = scale + np.log(s)
    with np.errstate(divide="ignore"):
        return np.sign(cur), scale + np.log(np.abs(cur))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for int_0^inf x^alpha e^-x f(x) dx ~ sum w_j f(x_j)."""

    order: int
    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


MAX_RULE_ORDER = 512


def gauss_laguerre_rule(order: int, alpha: float) -> QuadratureRule:
    """Generalized Gauss-Laguerre rule of a given order for weight x^alpha e^-x.

    Nodes are the roots of L_N^(alpha), found by eigen-decomposition of the
    symmetric Jacobi tridiagonal matrix and polished with one Newton step.
    Weights use w_j = Gamma(N+alpha+1) x_j / (N! (N+1)^2 [L_{N+1}^(alpha)(x_j)]^2).
    """
    if not (1 <= order <= MAX_RULE_ORDER):
        raise DomainError(f"order must be in [1, {MAX_RULE_ORDER}], got {order}")
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    n = int(order)
    i = np.arange(n, dtype=float)
    diag = 2 * i + alpha + 1
    off = np.sqrt((i[:-1] + 1) * (i[:-1] + 1 + alpha)) if n > 1 else np.empty(0)
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    # one Newton polish: d/dx L_n^(a)(x) = -L_{n-1}^(a+1)(x)
    val_sign, val_log = _laguerre_scaled(n, alpha, nodes)
    der_sign, der_log = _laguerre_scaled(n - 1, alpha + 1, nodes)
    with np.errstate(invalid="ignore", over="ignore"):
        step = -val_sign * der_sign * np.exp(val_log - der_log)
    nodes = nodes - np.nan_to_num(step)
    if not (np.all(np.isfinite(nodes)) and np.all(np.diff(nodes) > 0) and nodes[0] > 0):
        raise NumericError("Laguerre root-finding produced an invalid node set")

    _, lnp1_log = _laguerre_scaled(n + 1, alpha, nodes)
    log_w = (
        sp.gammaln(n + alpha + 1)
        - sp.gammaln(n + 1)
        - 2.0 * np.log(n + 1.0)
        + np.log(nodes)
        - 2.0 * lnp1_log
    )
    weights = np.exp(log_w)
    if not np.all(np.isfinite(weights)):
        raise NumericError("Laguerre weight computation overflowed")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order=n, alpha=float(alpha), nodes=nodes, weights=weights)


_RULE_CACHE: dict[tuple[int, float], QuadratureRule] = {}


def cached_rule(order: int, alpha: float) -> QuadratureRule:
    """Memoized gauss_laguerre_rule; alpha is keyed exactly."""
    key = (order, float(alpha))
    rule = _RULE_CACHE.get(key)
    if rule is None:
        rule = gauss_laguerre_rule(order, alpha)
        if len(_RULE_CACHE) > 256:
            _RULE_CACHE.clear()
        _RULE_CACHE[key] = rule
    return rule
