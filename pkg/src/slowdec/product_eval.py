"""Log-moduli of canonical products over materialized zero sequences.

``ProductEvaluator.log_abs(z)`` returns the finite sum
``sum_{|lambda| <= R} m ln|1 - z/lambda|`` together with

* ``tail_correction``: the contribution of the unmaterialized zeros under a
  uniform-density model (``Delta`` zeros per unit length on each side);
* ``corrected_bound``: a bound on ``|true - value - tail_correction|``
  assuming the counting deviation beyond ``R`` grows at most like
  ``ln^2 t`` from its observed size on ``[R/2, R]``;
* ``tail_bound = |tail_correction| + corrected_bound``, a bound on
  ``|true - value|``.

Many-point evaluation clusters the points and splits the zeros into a near
set (summed directly) and a far set (Taylor expansion about the cluster
center), which makes windows of ~10^4 points over ~10^6 zeros cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import AtZeroError, PoleError, RadiusError, SlowdecError
from .seqcore import density_estimate

__all__ = [
    "LogModulus",
    "LogModulusArray",
    "ProductEvaluator",
    "Phi0Evaluator",
    "log_abs_product",
    "eval_phi0_log",
    "log_abs_sin_pi",
]

_DIRECT_LIMIT = 4_000_000
_FAR_TERM_FLOOR = 1e-20


@dataclass(frozen=True)
class LogModulus:
    value: float
    tail_bound: float
    at_zero: bool = False
    tail_correction: float = 0.0
    corrected_bound: float = 0.0

    @property
    def corrected(self):
        return self.value + self.tail_correction


@dataclass(frozen=True)
class LogModulusArray:
    value: np.ndarray
    tail_bound: np.ndarray
    at_zero: np.ndarray
    tail_correction: np.ndarray
    corrected_bound: np.ndarray

    @property
    def corrected(self):
        return self.value + self.tail_correction

    def __len__(self):
        return self.value.size

    def __getitem__(self, i):
        return LogModulus(float(self.value[i]), float(self.tail_bound[i]), bool(self.at_zero[i]),
                          float(self.tail_correction[i]), float(self.corrected_bound[i]))


def _log_abs_one_minus(w):
    """``ln|1 - w|``: log1p form for small ``|w|``, direct form otherwise."""
    w = np.asarray(w)
    small = np.abs(w) < 0.5
    out = np.empty(w.shape)
    ws = w[small]
    wl = w[~small]
    if np.iscomplexobj(w):
        out[small] = 0.5 * np.log1p(ws.real * (ws.real - 2.0) + np.square(ws.imag))
        with np.errstate(divide="ignore"):
            out[~small] = 0.5 * np.log(np.square(1.0 - wl.real) + np.square(wl.imag))
    else:
        out[small] = np.log1p(-ws)
        with np.errstate(divide="ignore"):
            out[~small] = np.log(np.abs(1.0 - wl))
    return out


def _log_abs_ratio(lam, z):
    """``ln|1 - z/lam|`` elementwise, accurate both far from and close to ``lam``."""
    w = z / lam
    out = _log_abs_one_minus(w)
    near = np.abs(w) >= 0.5
    if np.any(near):
        ln = lam[near] if np.ndim(lam) else lam
        zn = z[near] if np.ndim(z) else z
        with np.errstate(divide="ignore"):
            out[near] = np.log(np.abs(ln - zn)) - np.log(np.abs(ln))
    return out


def _int_log_sq_over_t3(r):
    """``int_r^inf ln^2 t / t^3 dt``."""
    L = math.log(r)
    return (L * L / 2 + L / 2 + 0.25) / (r * r)


def _int_log_sq_over_t2(r):
    """``int_r^inf ln^2 t / t^2 dt``."""
    L = math.log(r)
    return (L * L + 2 * L + 2) / r


class ProductEvaluator:
    """Evaluate ``ln|prod (1 - z/lambda)|`` over a :class:`ZeroSequence`.

    Parameters
    ----------
    seq : ZeroSequence
    pairing : {"principal", "even"}
        ``"even"`` groups ``lambda`` with ``-lambda`` into ``1 - z^2/lambda^2``
        and requires ``seq.even``.
    exclusion_radius : float, optional
        Absolute distance below which ``z`` counts as a zero.  Default is
        ``1e-12 * max(1, |z|)``.
    tail_model : {"density", "none"}
        Whether to report a density-model correction for the zeros beyond
        the materialization radius.
    """

    def __init__(self, seq, pairing="principal", exclusion_radius=None, tail_model="density"):
        if pairing not in ("principal", "even"):
            raise SlowdecError(f"unknown pairing {pairing!r}")
        if pairing == "even" and not seq.even:
            raise SlowdecError("even-form pairing requires an even sequence")
        if exclusion_radius is not None and not exclusion_radius > 0:
            raise SlowdecError("exclusion_radius must be positive")
        if tail_model not in ("density", "none"):
            raise SlowdecError(f"unknown tail model {tail_model!r}")
        self.seq = seq
        self.pairing = pairing
        self.exclusion_radius = exclusion_radius
        self.tail_model = tail_model

    def __repr__(self):
        return f"ProductEvaluator({self.seq!r}, pairing={self.pairing!r})"

    @property
    def max_abs(self):
        """Largest ``|z|`` for which tail bounds are valid."""
        return self.seq.radius / 2.0

    @property
    def density(self):
        return self._density[0]

    @cached_property
    def _density(self):
        try:
            return density_estimate(self.seq, return_spread=True)
        except SlowdecError:
            return 0.0, float("inf")

    # ------------------------------------------------------------------ tail

    @cached_property
    def _fluctuation(self):
        """Observed ``max |N(s) - N(R) - Delta (s - R)|`` on ``[R/2, R]`` per side, at least 1."""
        seq = self.seq
        R = seq.radius
        delta = self.density
        out = []
        for side in (seq.values.real > 0, seq.values.real < 0):
            mod = seq.moduli[side]
            cum = np.cumsum(seq.multiplicities[side])
            n_r = int(cum[-1]) if cum.size else 0
            k = int(np.searchsorted(mod, R / 2, side="left"))
            after = cum[k:] - n_r - delta * (mod[k:] - R)
            before = np.r_[0, cum][k:-1] - n_r - delta * (mod[k:] - R)
            at_half = (cum[k - 1] if k > 0 else 0) - n_r + delta * R / 2
            cands = np.concatenate((np.abs(after), np.abs(before), [abs(at_half)]))
            out.append(max(1.0, float(cands.max())))
        return tuple(out)

    def _tail(self, z):
        """Reported correction, corrected bound and total tail bound for points ``z``."""
        R = self.seq.radius
        z = np.asarray(z)
        az = np.abs(z)
        if az.size and np.any(az > self.max_abs * (1 + 1e-12)):
            raise RadiusError(
                f"|z| = {float(az.max()):g} beyond the tail-valid region |z| <= {self.max_abs:g} "
                f"(materialize to radius >= {2 * float(az.max()):g})")
        if math.isinf(R):
            # the materialized list is the whole zero set
            zero = np.zeros(az.shape)
            return zero, zero, zero
        delta, spread = self._density
        w = z.astype(complex) / R
        model = -delta * R * np.real((1 - w) * np.log1p(-w) + (1 + w) * np.log1p(w))
        f_pos, f_neg = self._fluctuation
        if R <= math.e:
            bound = np.full(az.shape, np.inf)
        elif self.pairing == "even":
            bound = (8.0 / 3.0) * az ** 2 * f_pos * _int_log_sq_over_t3(R) / math.log(R) ** 2
        else:
            bound = 2.0 * az * (f_pos + f_neg) * _int_log_sq_over_t2(R) / math.log(R) ** 2
        if not self.seq.is_real:
            bound = bound + 4.0 * max(delta, 0.5) * az * self.seq.m0 * (math.log(R) + 1) / R
        if spread:
            bound = bound + spread * (8.0 / 3.0) * az ** 2 / R
        if self.tail_model == "none":
            return np.zeros(az.shape), np.abs(model) + bound, np.abs(model) + bound
        return model, bound, np.abs(model) + bound

    # ------------------------------------------------------------ evaluation

    def _excl(self, z):
        if self.exclusion_radius is not None:
            return np.full(np.shape(z), self.exclusion_radius)
        return 1e-12 * np.maximum(1.0, np.abs(z))

    @cached_property
    def _even_half(self):
        """Representatives of the pairs ``{lambda, -lambda}``."""
        v = self.seq.values
        keep = (v.real > 0) | ((v.real == 0) & (v.imag > 0))
        return v[keep], self.seq.multiplicities[keep]

    def _direct_terms(self, z):
        """Per-zero terms for scalar ``z`` (principal or paired)."""
        if self.pairing == "even":
            lam, m = self._even_half
            w = (z / lam) ** 2
            near = np.abs(w) >= 0.5
            t = np.empty(lam.shape)
            t[~near] = _log_abs_one_minus(w[~near])
            ln = lam[near]
            with np.errstate(divide="ignore"):
                t[near] = np.log(np.abs(ln - z)) + np.log(np.abs(ln + z)) - 2.0 * np.log(np.abs(ln))
            return t * m
        lam, m = self.seq.values, self.seq.multiplicities
        return _log_abs_ratio(lam, z) * m

    def log_abs(self, z):
        """Single-point evaluation with compensated summation."""
        z = complex(z) if np.iscomplexobj(z) or not self.seq.is_real else float(z)
        if np.iscomplexobj(self.seq.values):
            z = complex(z)
        corr, bound, total = (float(a[0]) for a in self._tail(np.asarray([z])))
        dist = np.min(np.abs(self.seq.values - z)) if len(self.seq) else np.inf
        if dist < self._excl(z):
            return LogModulus(-np.inf, total, True, corr, bound)
        val = math.fsum(self._direct_terms(z).tolist())
        return LogModulus(val, total, False, corr, bound)

    def log_abs_many(self, z, cluster_width=None):
        """Vectorized evaluation at an array of points."""
        z = np.asarray(z)
        if z.dtype.kind not in "fc":
            z = z.astype(float)
        if not self.seq.is_real:
            z = z.astype(complex)
        corr, bound, total = self._tail(z)
        if z.size * len(self.seq) <= _DIRECT_LIMIT:
            val, at0 = self._sum_direct(z)
        else:
            val, at0 = self._sum_clustered(z, cluster_width)
        val = np.where(at0, -np.inf, val)
        return LogModulusArray(val, total, at0, corr, bound)

    def _sum_direct(self, z):
        val = np.empty(z.shape)
        at0 = np.zeros(z.shape, bool)
        excl = self._excl(z)
        for i, zi in enumerate(z):
            terms = self._direct_terms(zi)
            val[i] = terms.sum()
            at0[i] = len(self.seq) > 0 and np.min(np.abs(self.seq.values - zi)) < excl[i]
        return val, at0

    @cached_property
    def _by_real(self):
        v = self.seq.values
        order = np.argsort(v.real, kind="stable")
        return v[order], self.seq.multiplicities[order].astype(float)

    def _sum_clustered(self, z, cluster_width=None):
        lam, m = self._by_real
        dens = max(2.0 * self.density, 0.25)
        W = cluster_width or float(np.clip(256.0 / dens, 16.0, 1024.0))
        order = np.argsort(z.real, kind="stable")
        zs = z[order]
        val = np.empty(z.shape)
        at0 = np.zeros(z.shape, bool)
        excl = self._excl(zs)
        i = 0
        n = zs.size
        while i < n:
            x0 = zs[i].real
            j = int(np.searchsorted(zs.real, x0 + W, side="right"))
            block = zs[i:j]
            if np.iscomplexobj(block):
                ib = block.imag
                # split wide imaginary spread into separate sub-blocks
                if ib.max() - ib.min() > W:
                    j = i + max(1, int(np.argmax(np.abs(ib - ib[0]) > W)) or (j - i))
                    block = zs[i:j]
            v, a = self._cluster(block, lam, m, excl[i:j])
            val[order[i:j]] = v
            at0[order[i:j]] = a
            i = j
        return val, at0

    def _cluster(self, block, lam, m, excl):
        if np.iscomplexobj(block):
            c = complex(0.5 * (block.real.min() + block.real.max()), 0.5 * (block.imag.min() + block.imag.max()))
        else:
            c = 0.5 * (block.min() + block.max())
        h = block - c
        rho = float(np.max(np.abs(h))) if h.size else 0.0
        r_near = 2.0 * rho + 1.0
        lo = int(np.searchsorted(lam.real, c.real - r_near, side="left"))
        hi = int(np.searchsorted(lam.real, c.real + r_near, side="right"))
        cand = lam[lo:hi]
        near_mask = np.abs(cand - c) <= r_near
        near_l = cand[near_mask]
        near_m = m[lo:hi][near_mask]
        mid_l = cand[~near_mask]
        mid_m = m[lo:hi][~near_mask]

        # near part: direct
        if near_l.size:
            d = block[:, None] - near_l[None, :]
            ad = np.abs(d)
            at0 = (ad < excl[:, None]).any(axis=1)
            with np.errstate(divide="ignore"):
                near = (np.log(ad) - np.log(np.abs(near_l))[None, :]) @ near_m
        else:
            at0 = np.zeros(block.shape, bool)
            near = np.zeros(block.shape)

        # far part: ln|1 - c/lam| + Re ln(1 - h/(lam - c)), expanded in h.
        # Blocks are sorted by real part, so zeros whose term u^p can still
        # exceed the floor form a contiguous run next to the near gap.
        left_l, left_m = lam[:lo], m[:lo]
        right_l, right_m = lam[hi:], m[hi:]
        base = 0.0
        for bl, bm in ((left_l, left_m), (mid_l, mid_m), (right_l, right_m)):
            if bl.size:
                base += float(np.dot(_log_abs_ratio(bl, c), bm))
        rho_s = max(rho, 1e-300)
        hs = h / rho_s
        u_left = rho_s / (left_l - c)
        u_right = rho_s / (right_l - c)
        u_mid = rho_s / (mid_l - c)
        pw_left, pw_right, pw_mid = u_left.copy(), u_right.copy(), u_mid.copy()
        hp = np.ones(block.shape, dtype=complex if np.iscomplexobj(hs) or np.iscomplexobj(u_left) else float)
        corr = np.zeros(block.shape)
        for p in range(1, 201):
            reach = rho_s / _FAR_TERM_FLOOR ** (1.0 / p)
            a = int(np.searchsorted(left_l.real, c.real - reach, side="left"))
            b = int(np.searchsorted(right_l.real, c.real + reach, side="right"))
            if a >= left_l.size and b == 0 and (mid_l.size == 0 or np.max(np.abs(pw_mid)) < _FAR_TERM_FLOOR):
                break
            s_p = np.dot(pw_left[a:], left_m[a:]) + np.dot(pw_right[:b], right_m[:b]) + np.dot(pw_mid, mid_m)
            hp = hp * hs
            corr -= np.real(hp * s_p) / p
            pw_left[a:] *= u_left[a:]
            pw_right[:b] *= u_right[:b]
            pw_mid *= u_mid
        return near + base + corr, at0

    def real_zeros_between(self, lo, hi):
        if self.seq.is_real:
            return self.seq.real_zeros_between(lo, hi)
        re = np.sort(self.seq.values.real)
        return re[(re >= lo) & (re <= hi)]


def log_abs_product(ev, z):
    """``ln|prod_{|lambda| <= R} (1 - z/lambda)|`` with tail data; see :class:`ProductEvaluator`."""
    if abs(z) > ev.max_abs * (1 + 1e-12):
        raise RadiusError(f"|z| = {abs(z):g} beyond the tail-valid region |z| <= {ev.max_abs:g}")
    return ev.log_abs(z)


# --------------------------------------------------------------------------
# phi_0(z) = sin(pi z) / (pi z s_0(z)),  s_0(z) = prod_{k>=1} (1 - z^2/4^k)
# --------------------------------------------------------------------------

_LN2 = math.log(2.0)


def log_abs_sin_pi(z):
    """``ln|sin(pi z)|`` without cancellation near integers or overflow for large ``|Im z|``."""
    z = np.asarray(z)
    x = z.real.astype(float)
    y = np.abs(z.imag).astype(float) if np.iscomplexobj(z) else np.zeros_like(x)
    xr = x - np.round(x)
    s = np.sin(np.pi * xr)
    with np.errstate(divide="ignore", over="ignore"):
        small = np.pi * y < 15.0
        out = np.empty(x.shape)
        sh = np.sinh(np.pi * y[small])
        out[small] = 0.5 * np.log(s[small] ** 2 + sh ** 2)
        big = ~small
        e = np.exp(-2.0 * np.pi * y[big])
        c2 = np.cos(2.0 * np.pi * xr[big])
        out[big] = np.pi * y[big] - _LN2 + 0.5 * np.log1p(-2.0 * c2 * e + e * e)
    return out


class Phi0Evaluator:
    """Closed-form evaluator for ``phi_0(z) = sin(pi z) / (pi z s_0(z))``.

    Zeros: nonzero integers other than ``+-2^k`` (``k >= 1``).  At ``+-2^k``
    the quotient as written has a vanishing denominator and
    :class:`PoleError` is raised; points near ``+-2^k`` are evaluated with
    the cancelling factors combined analytically.
    """

    density = 1.0
    max_abs = float("inf")
    even = True

    def __init__(self, exclusion_radius=None, rel_cutoff=1e-16):
        self.exclusion_radius = exclusion_radius
        self.rel_cutoff = rel_cutoff

    def __repr__(self):
        return "Phi0Evaluator()"

    def log_abs_many(self, z):
        z = np.atleast_1d(np.asarray(z))
        zc = z.astype(complex)
        az = np.abs(zc)
        x = zc.real
        # nearest power of two in modulus (k >= 1)
        with np.errstate(divide="ignore"):
            k_near = np.where(az >= 1.0, np.round(np.log2(np.maximum(np.abs(x), 1.0))), 0).astype(int)
        k_near = np.maximum(k_near, 1)
        p2 = np.ldexp(1.0, k_near)
        sgn = np.where(x >= 0, 1.0, -1.0)
        u = zc - sgn * p2
        if np.any(u == 0):
            raise PoleError("phi_0 evaluated at +-2^k, a zero of s_0")
        combine = np.abs(u) < 0.5
        with np.errstate(divide="ignore"):
            k_max = int(max(1, math.ceil(math.log(max(float(az.max()), 1.0) ** 2 / self.rel_cutoff, 4.0))))
            ks = np.arange(1, k_max + 1)
            w = (zc[:, None] ** 2) / (4.0 ** ks[None, :])
            terms = _log_abs_one_minus(w)
            skip = combine[:, None] & (ks[None, :] == k_near[:, None])
            s0 = np.where(skip, 0.0, terms).sum(axis=1)

            ls = log_abs_sin_pi(zc)
            tiny = az < 1e-4
            lsinc = np.empty(az.shape)
            pz = np.pi * zc[tiny]
            lsinc[tiny] = np.log(np.abs(1 - pz ** 2 / 6 + pz ** 4 / 120))
            lsinc[~tiny] = ls[~tiny] - np.log(np.pi * az[~tiny])
            # combined factor near 2^k: |sin(pi u)| 4^k / (|u| |2^{k+1} sgn + u|) / (pi |z|)
            comb = combine
            lc = (log_abs_sin_pi(u[comb]) - np.log(np.abs(u[comb]))
                  - np.log(np.abs(2.0 * p2[comb] * sgn[comb] + u[comb])) + 2.0 * k_near[comb] * _LN2
                  - np.log(np.pi * az[comb]))
            val = lsinc - s0
            val[comb] = lc - s0[comb]
        excl = self.exclusion_radius if self.exclusion_radius is not None else 1e-12 * np.maximum(1.0, az)
        n = np.round(x)
        is_pow2 = (np.abs(n) >= 2) & (np.abs(np.log2(np.maximum(np.abs(n), 1.0)) % 1.0) == 0)
        at0 = (n != 0) & ~is_pow2 & (np.abs(zc - n) < excl)
        val = np.where(at0, -np.inf, val)
        tail = 2.0 * az ** 2 / (3.0 * 4.0 ** k_max)
        zeros = np.zeros(az.shape)
        return LogModulusArray(val, tail, at0, zeros, tail)

    def log_abs(self, z):
        return self.log_abs_many(np.asarray([z]))[0]

    def real_zeros_between(self, lo, hi):
        n = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)
        a = np.abs(n)
        is_pow2 = (a >= 2) & (np.log2(np.maximum(a, 1.0)) % 1.0 == 0)
        return n[(n != 0) & ~is_pow2]


def eval_phi0_log(z, exclusion_radius=None):
    """``ln|phi_0(z)|`` for ``sin(pi z) / (pi z s_0(z))``; see :class:`Phi0Evaluator`."""
    return Phi0Evaluator(exclusion_radius).log_abs(z)
