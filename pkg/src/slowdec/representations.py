"""Integral representations of ``ln|phi|`` used as independent oracles.

* :func:`favorov_log` integrates ``(n(0,t) - n(z,t)) / t`` exactly.  Both
  counting functions are step functions, so each zero ``a`` contributes
  ``ln min(R, |a - z|) - ln min(R, |a|)`` and no quadrature is involved.
* :class:`PoissonRepresentation` evaluates the half-plane formula
  ``ln|phi(z)| = pi Delta Im z + (1/pi) int Im z ln|phi(t)| / |z - t|^2 dt``
  from samples of ``ln|phi|`` on the real line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import AtZeroError, RadiusError, SlowdecError
from .product_eval import ProductEvaluator
from .seqcore import density_estimate

__all__ = [
    "favorov_log",
    "PoissonResult",
    "PoissonRepresentation",
    "poisson_log",
    "poisson_log_lower",
]


def favorov_log(seq, z, R=None, exclusion_radius=None):
    """Exact ``int_0^R (n(0,t) - n(z,t)) / t dt`` over the materialized zeros.

    With ``R=None`` the cutoff covers every materialized zero from both
    centers, which reproduces ``ln|prod (1 - z/a)|`` over the finite set.
    """
    z = complex(z)
    if z == 0:
        return 0.0
    vals = seq.values
    d = np.abs(vals - z)
    excl = exclusion_radius if exclusion_radius is not None else 1e-12 * max(1.0, abs(z))
    if d.size and d.min() < excl:
        raise AtZeroError(f"z = {z} lies within {excl:g} of a zero; the integral diverges")
    if R is None:
        R = (float(seq.moduli.max()) if len(seq) else 0.0) + abs(z) + 1.0
    else:
        if not R > 0:
            raise SlowdecError("R must be positive")
        if R > seq.radius * (1 + 1e-12):
            raise RadiusError(f"R = {R:g} exceeds the materialization radius {seq.radius:g}")
    terms = (np.log(np.minimum(R, d)) - np.log(np.minimum(R, seq.moduli))) * seq.multiplicities
    return math.fsum(terms.tolist())


# ----------------------------------------------------------------- Poisson

_GL16 = np.polynomial.legendre.leggauss(16)
_GL8 = np.polynomial.legendre.leggauss(8)


def _mapped_rule(nodes_weights):
    """Gauss-Legendre on [0, 1] composed with the quintic smoothstep.

    The map has vanishing first and second derivatives at both ends, which
    turns the logarithmic endpoint singularities at zeros into smooth
    integrands.
    """
    x, w = nodes_weights
    s = 0.5 * (x + 1.0)
    ws = 0.5 * w
    g = s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)
    dg = 30.0 * s * s * (1.0 - s) ** 2
    return g, ws * dg


_RULE_HI = _mapped_rule(_GL16)
_RULE_LO = _mapped_rule(_GL8)


@dataclass(frozen=True)
class PoissonResult:
    value: float
    quadrature_error: float
    evaluation_error: float
    tail_estimate: float
    fitted_constant: float

    @property
    def error_estimate(self):
        return self.quadrature_error + self.evaluation_error + self.tail_estimate

    def __float__(self):
        return self.value


class PoissonRepresentation:
    """Half-plane Poisson representation of ``ln|phi|`` for real zeros.

    ``ln|phi(t)|`` is sampled once on ``[-tail_cut, tail_cut]``; evaluation
    at any number of points ``z`` then costs one weighted sum each.

    Parameters
    ----------
    evaluator : ProductEvaluator
        Supplies ``ln|phi(t)|`` (density-corrected) on the real line.
    tail_cut : float
        Truncation of the real-line integral; must not exceed ``evaluator.max_abs``.
    quadrature_step : float
        Longest piece of the real line integrated with one rule; gaps between
        consecutive zeros are subdivided to this length.
    """

    def __init__(self, evaluator, tail_cut, quadrature_step=1.0):
        seq = evaluator.seq
        if not seq.is_real:
            raise SlowdecError("the Poisson representation needs real zeros")
        if not tail_cut > 0 or tail_cut > evaluator.max_abs * (1 + 1e-12):
            raise RadiusError(f"tail_cut must lie in (0, {evaluator.max_abs:g}]")
        if not quadrature_step > 0:
            raise SlowdecError("quadrature_step must be positive")
        self.evaluator = evaluator
        self.tail_cut = float(tail_cut)
        self.quadrature_step = float(quadrature_step)
        self.delta, spread = density_estimate(seq, return_spread=True)
        self.density_spread = spread
        self._build()

    def _build(self):
        T = self.tail_cut
        zs = self.evaluator.real_zeros_between(-T, T)
        edges = np.unique(np.concatenate(([-T, T], zs)))
        gaps = np.diff(edges)
        nsub = np.maximum(1, np.ceil(gaps / self.quadrature_step).astype(int))
        pieces_lo = np.repeat(edges[:-1], nsub) + np.concatenate(
            [np.arange(k) * (g / k) for k, g in zip(nsub, gaps)])
        pieces_len = np.repeat(gaps / nsub, nsub)
        self.pieces_lo = pieces_lo
        self.pieces_len = pieces_len
        g_hi, w_hi = _RULE_HI
        g_lo, w_lo = _RULE_LO
        t_hi = pieces_lo[:, None] + pieces_len[:, None] * g_hi[None, :]
        t_lo = pieces_lo[:, None] + pieces_len[:, None] * g_lo[None, :]
        self.t_hi, self.w_hi = t_hi, pieces_len[:, None] * w_hi[None, :]
        self.t_lo, self.w_lo = t_lo, pieces_len[:, None] * w_lo[None, :]
        both = np.concatenate((t_hi.ravel(), t_lo.ravel()))
        lm = self.evaluator.log_abs_many(both)
        if np.any(lm.at_zero):
            raise SlowdecError("a quadrature node fell on a zero; adjust quadrature_step")
        n_hi = t_hi.size
        self.f_hi = lm.corrected[:n_hi].reshape(t_hi.shape)
        self.f_lo = lm.corrected[n_hi:].reshape(t_lo.shape)
        self.b_hi = lm.corrected_bound[:n_hi].reshape(t_hi.shape)
        self.fitted_constant = self._fit_tail_constant()

    def _fit_tail_constant(self):
        """Constant ``c`` in ``|ln|phi(t)|| <= c ln^2 t ln ln t`` fitted on ``[T/10, T]``."""
        T = self.tail_cut
        mid = np.abs(self.pieces_lo + 0.5 * self.pieces_len)
        sel = (mid >= max(T / 10.0, 16.0)) & (mid <= T)
        if not np.any(sel):
            return float("inf")
        mean_abs = np.sum(np.abs(self.f_hi[sel]) * self.w_hi[sel], axis=1) / self.pieces_len[sel]
        lm = np.log(mid[sel])
        return float(np.max(mean_abs / (lm * lm * np.log(lm))))

    def _tail(self, x, y):
        c = self.fitted_constant
        if not np.isfinite(c):
            return float("inf")

        def f(t):
            lt = math.log(t)
            return c * lt * lt * math.log(lt) * (1.0 / ((x - t) ** 2 + y * y) + 1.0 / ((x + t) ** 2 + y * y))

        val, _ = integrate.quad(f, self.tail_cut, np.inf, limit=200)
        return y * val / math.pi

    def _integral(self, x, y):
        k_hi = y / ((x - self.t_hi) ** 2 + y * y) / math.pi
        k_lo = y / ((x - self.t_lo) ** 2 + y * y) / math.pi
        piece_hi = np.sum(k_hi * self.f_hi * self.w_hi, axis=1)
        piece_lo = np.sum(k_lo * self.f_lo * self.w_lo, axis=1)
        value = math.fsum(piece_hi.tolist())
        quad_err = float(np.sum(np.abs(piece_hi - piece_lo)))
        eval_err = float(np.sum(k_hi * self.b_hi * self.w_hi))
        return value, quad_err, eval_err

    def log_abs(self, z):
        """``ln|phi(z)|`` for ``Im z > 0``."""
        z = complex(z)
        if not z.imag > 0:
            raise SlowdecError("the upper-half-plane representation needs Im z > 0")
        x, y = z.real, z.imag
        integral, quad_err, eval_err = self._integral(x, y)
        value = math.pi * self.delta * y + integral
        eval_err += math.pi * self.density_spread * y
        return PoissonResult(value, quad_err, eval_err, self._tail(x, y), self.fitted_constant)

    def log_abs_lower(self, z):
        """``ln|phi(z)|`` for ``Im z < 0``: ``-pi Delta Im z - (1/pi) int Im z ln|phi(t)| / |z - t|^2 dt``."""
        z = complex(z)
        if not z.imag < 0:
            raise SlowdecError("the lower-half-plane representation needs Im z < 0")
        x, y = z.real, z.imag
        integral, quad_err, eval_err = self._integral(x, -y)
        value = -math.pi * self.delta * y + integral
        eval_err += math.pi * self.density_spread * abs(y)
        return PoissonResult(value, quad_err, eval_err, self._tail(x, -y), self.fitted_constant)


def _default_evaluator(seq):
    return ProductEvaluator(seq, pairing="even" if seq.even else "principal")


def poisson_log(seq, z, tail_cut, quadrature_step=1.0, evaluator=None):
    """Upper-half-plane Poisson representation of ``ln|phi(z)|`` (one-shot)."""
    if not complex(z).imag > 0:
        raise SlowdecError("poisson_log needs Im z > 0")
    ev = evaluator or _default_evaluator(seq)
    return PoissonRepresentation(ev, tail_cut, quadrature_step).log_abs(z)


def poisson_log_lower(seq, z, tail_cut, quadrature_step=1.0, evaluator=None):
    """Lower-half-plane counterpart of :func:`poisson_log`."""
    ev = evaluator or _default_evaluator(seq)
    return PoissonRepresentation(ev, tail_cut, quadrature_step).log_abs_lower(z)
