"""REML fit of a linear model with crossed subject and item intercepts.

Model, for observation ``k`` of subject ``s`` on item ``i``::

    y_k = b0 + beta * c_k + u_s + w_i + e_k
    u ~ N(0, var_subject), w ~ N(0, var_item), e ~ N(0, var_resid)

with ``c_k = -1/2`` in condition a and ``+1/2`` in condition b.

Writing ``V = var_resid * H`` with ``H = I + Z Lambda Lambda' Z'`` and
``Lambda`` the diagonal of relative standard deviations, every quantity the
restricted likelihood needs reduces to the ``q x q`` matrix
``M = I + Lambda Z'Z Lambda`` (``q = n_subjects + n_items``) through the
Woodbury identity, so a fit never forms an ``n x n`` matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, optimize

from .simulate import Dataset

__all__ = ["LmmFit", "fit_crossed_intercepts", "reml_criterion", "is_significant",
           "UnconvergedFitError"]

_LOG_2PI = math.log(2.0 * math.pi)
# relative sd below which the zero-variance edge is searched explicitly
_EDGE = 1e-2
# convergence tolerance on the REML criterion
_FTOL = 1e-9


class UnconvergedFitError(ValueError):
    pass


@dataclass(frozen=True)
class LmmFit:
    beta_hat: float
    se_beta: float
    t_value: float
    intercept_hat: float
    var_subject: float
    var_item: float
    var_resid: float
    converged: bool
    n_obs: int
    reml: float


class _CrossedModel:
    """Sufficient cross-products for one dataset."""

    def __init__(self, data: Dataset, log_transform: bool = True):
        if len(data) < 4:
            raise ValueError("too few observations to fit the model")
        y = data.response(log_transform)
        _, s_idx = np.unique(data.subject, return_inverse=True)
        _, i_idx = np.unique(data.item, return_inverse=True)
        ns, ni = s_idx.max() + 1, i_idx.max() + 1
        if ns < 2 or ni < 2:
            raise ValueError("need at least 2 subjects and 2 items")
        is_b = data.condition == "b"
        if is_b.all() or not is_b.any():
            raise ValueError("both conditions must be present")

        n = y.size
        # centering keeps y'y near the residual scale; the intercept absorbs it
        self.y_shift = float(y.mean())
        y = y - self.y_shift
        X = np.column_stack([np.ones(n), np.where(is_b, 0.5, -0.5)])
        q = ns + ni

        def zt(a):
            # Z'a for the two stacked indicator blocks
            out = np.zeros((q,) + a.shape[1:])
            np.add.at(out, s_idx, a)
            np.add.at(out, ns + i_idx, a)
            return out

        cross = np.zeros((ns, ni))
        np.add.at(cross, (s_idx, i_idx), 1.0)
        ZtZ = np.zeros((q, q))
        ZtZ[:ns, :ns] = np.diag(np.bincount(s_idx, minlength=ns))
        ZtZ[ns:, ns:] = np.diag(np.bincount(i_idx, minlength=ni))
        ZtZ[:ns, ns:] = cross
        ZtZ[ns:, :ns] = cross.T

        self.n, self.p, self.ns, self.ni = n, 2, int(ns), int(ni)
        self.ZtZ = ZtZ
        self.ZtX = zt(X)
        self.Zty = zt(y)
        self.XtX = X.T @ X
        self.Xty = X.T @ y
        self.yty = float(y @ y)
        if np.linalg.matrix_rank(self.XtX) < 2:
            raise ValueError("fixed-effects design is rank deficient")

    def _solve(self, rel_sd_subject, rel_sd_item):
        lam = np.concatenate([np.full(self.ns, rel_sd_subject), np.full(self.ni, rel_sd_item)])
        M = lam[:, None] * self.ZtZ * lam[None, :]
        M[np.diag_indices_from(M)] += 1.0
        cf = linalg.cho_factor(M, lower=True, check_finite=False)
        logdet_h = 2.0 * np.sum(np.log(np.diag(cf[0])))
        A = lam[:, None] * self.ZtX
        b = lam * self.Zty
        MiA = linalg.cho_solve(cf, A, check_finite=False)
        Mib = linalg.cho_solve(cf, b, check_finite=False)
        xhx = self.XtX - A.T @ MiA
        xhy = self.Xty - A.T @ Mib
        yhy = self.yty - b @ Mib
        cx = linalg.cho_factor(xhx, lower=True, check_finite=False)
        beta = linalg.cho_solve(cx, xhy, check_finite=False)
        rss = max(float(yhy - beta @ xhy), 0.0)
        logdet_xhx = 2.0 * np.sum(np.log(np.diag(cx[0])))
        return beta, rss, logdet_h, logdet_xhx, cx

    def criterion(self, var_subject, var_item, var_resid):
        """Restricted log-likelihood at the given variances."""
        beta, rss, logdet_h, logdet_xhx, _ = self._solve(
            math.sqrt(var_subject / var_resid), math.sqrt(var_item / var_resid))
        m = self.n - self.p
        return -0.5 * (m * _LOG_2PI + m * math.log(var_resid) + logdet_h + logdet_xhx
                       + rss / var_resid)

    def profiled(self, rel_sd_subject, rel_sd_item):
        """REML criterion with the residual variance profiled out."""
        beta, rss, logdet_h, logdet_xhx, cx = self._solve(rel_sd_subject, rel_sd_item)
        m = self.n - self.p
        sigma2 = rss / m
        if sigma2 <= 0:
            return -np.inf, beta, sigma2, cx
        crit = -0.5 * (m * (1.0 + _LOG_2PI + math.log(sigma2)) + logdet_h + logdet_xhx)
        return crit, beta, sigma2, cx


def _check_variances(var_subject, var_item, var_resid):
    if not var_resid > 0:
        raise ValueError("var_resid must be positive; the model is singular otherwise")
    if var_subject < 0 or var_item < 0:
        raise ValueError("variance components must be non-negative")


def reml_criterion(data: Dataset, var_subject: float, var_item: float, var_resid: float,
                   log_transform: bool = True) -> float:
    """Restricted log-likelihood of the crossed random-intercepts model.

    The constant ``log|X'X| / 2`` is not included, so with both random
    variances at zero the value is the usual REML log-likelihood of OLS.
    """
    _check_variances(var_subject, var_item, var_resid)
    return _CrossedModel(data, log_transform).criterion(var_subject, var_item, var_resid)


def _optimize(model: _CrossedModel):
    """Maximize the profiled criterion over relative sds (>= 0).

    Returns the optimum and whether the simplex search met its tolerance.
    """
    def negcrit(theta):
        crit = model.profiled(theta[0], theta[1])[0]
        return -crit if np.isfinite(crit) else 1e300

    res = optimize.minimize(negcrit, (1.0, 1.0), method="Nelder-Mead",
                            bounds=[(0.0, None), (0.0, None)],
                            options={"xatol": 1e-7, "fatol": _FTOL, "maxiter": 4000})
    theta, best = np.maximum(res.x, 0.0), res.fun
    # Nelder-Mead creeps toward a zero variance only slowly; search the
    # edges directly when the optimum is near one.
    for k in (0, 1):
        if theta[k] < _EDGE:
            def on_edge(x, k=k):
                cand = [0.0, 0.0]
                cand[1 - k] = x
                return negcrit(cand)
            edge = optimize.minimize_scalar(on_edge, bounds=(0.0, max(4.0 * theta[1 - k], 1.0)),
                                            method="bounded", options={"xatol": 1e-9})
            if edge.fun <= best:
                theta = np.zeros(2)
                theta[1 - k] = edge.x
                best = edge.fun
    if negcrit((0.0, 0.0)) <= best:
        theta = np.zeros(2)
    return theta, bool(res.success)


def fit_crossed_intercepts(data: Dataset, log_transform: bool = True) -> LmmFit:
    """Fit fixed condition effect plus crossed subject and item intercepts by REML.

    Parameters
    ----------
    data : Dataset
        Long-format trials with both conditions present.
    log_transform : bool
        Analyse ``log(rt)`` (default) or raw ``rt``.

    Returns
    -------
    LmmFit
        ``converged`` is False when the optimizer did not meet its
        tolerance; such fits are returned rather than raised so replication
        drivers can count them.
    """
    model = _CrossedModel(data, log_transform)
    theta, success = _optimize(model)
    crit, beta, sigma2, cx = model.profiled(theta[0], theta[1])
    cov = sigma2 * linalg.cho_solve(cx, np.eye(2), check_finite=False)
    se = math.sqrt(cov[1, 1])
    converged = success and np.isfinite(crit) and se > 0
    return LmmFit(
        beta_hat=float(beta[1]),
        se_beta=float(se),
        t_value=float(beta[1] / se) if se > 0 else math.nan,
        intercept_hat=float(beta[0]) + model.y_shift,
        var_subject=float(sigma2 * theta[0] ** 2),
        var_item=float(sigma2 * theta[1] ** 2),
        var_resid=float(sigma2),
        converged=bool(converged),
        n_obs=model.n,
        reml=float(crit),
    )


def is_significant(fit: LmmFit, threshold: float = 2.0) -> bool:
    """``|t| > threshold``; raises for an unconverged fit."""
    if not fit.converged:
        raise UnconvergedFitError("significance is undefined for an unconverged fit")
    return abs(fit.t_value) > threshold
