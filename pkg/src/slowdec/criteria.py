"""Finite-grid decision procedures for slow decrease.

Every check here is evidence on a finite grid, never a proof.  Asymptotic
statements (``O(.)``, ``limsup``) are rendered by comparing the largest
sample of the last decade of a geometric grid with that of the first
decade; a ratio of at least ``growth_threshold`` counts as growth.  All
grids are recorded in the returned objects.

All integrals of counting functions are exact: the integrands are step
functions of ``t`` divided by ``t``, so each zero contributes a difference
of clipped logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import RadiusError, SlowdecError
from .product_eval import Phi0Evaluator, ProductEvaluator
from .seqcore import ZeroSequence, density_estimate, nu, project_real

__all__ = [
    "SLOWLY_DECREASING",
    "NOT_SLOWLY_DECREASING",
    "INCONCLUSIVE",
    "geometric_grid",
    "SlowDecreaseParams",
    "Verdict",
    "AsymptoticReport",
    "Cond2Report",
    "Diagnostic",
    "LemmaOneReport",
    "Classification",
    "check_slow_decrease_def",
    "check_lemma2",
    "check_theorem1",
    "cond2_quantity",
    "check_theorem2",
    "cond2_3_quantity",
    "check_theorem3",
    "lemma1_consistency",
    "lemma3_diagnostic",
    "lemma4_diagnostic",
    "classify",
    "required_radius",
]

SLOWLY_DECREASING = "slowly-decreasing"
NOT_SLOWLY_DECREASING = "not-slowly-decreasing"
INCONCLUSIVE = "inconclusive"

BOUNDED = "bounded"
GROWING = "growing"
UNDETERMINED = "undetermined"

GROWTH_THRESHOLD = 1.5

# Values below these floors never count as growth: a ratio that stays
# under its floor is compatible with the bound being tested.
FLOOR_EXPONENT = 2.0
FLOOR_LEMMA2 = 1.0
FLOOR_THEOREM1 = 0.25
FLOOR_COND2 = 1.0

DEFAULT_A_GRID = (1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0)
DEFAULT_COND2_A_GRID = (2.0, 4.0, 8.0, 16.0, 32.0)


def geometric_grid(lo=1e2, hi=1e5, per_decade=8):
    """Points ``lo * 10**(k / per_decade)`` up to ``hi`` inclusive."""
    if not (0 < lo <= hi) or per_decade < 1:
        raise SlowdecError("geometric_grid needs 0 < lo <= hi and per_decade >= 1")
    n = int(math.floor(per_decade * math.log10(hi / lo) + 1e-9))
    return tuple(float(lo * 10.0 ** (k / per_decade)) for k in range(n + 1))


DEFAULT_X_GRID = geometric_grid()


def _as_grid(values, name):
    g = tuple(float(v) for v in values)
    if not g:
        raise SlowdecError(f"{name} must be nonempty")
    if any(b <= a for a, b in zip(g, g[1:])):
        raise SlowdecError(f"{name} must be strictly increasing")
    if g[0] <= 0:
        raise SlowdecError(f"{name} must be positive")
    return g


def _decade_trend(ts, vals, floor, threshold=GROWTH_THRESHOLD):
    """Compare the sup over the last decade of ``|t|`` with the sup over the first."""
    ts = np.abs(np.asarray(ts, float))
    vals = np.asarray(vals, float)
    lo, hi = ts.min(), ts.max()
    if hi < 10.0 * lo * (1 - 1e-9):
        return UNDETERMINED, float("nan"), float("nan"), float("nan")
    first = float(np.max(vals[ts <= 10.0 * lo * (1 + 1e-9)]))
    last = float(np.max(vals[ts >= hi / 10.0 * (1 - 1e-9)]))
    ratio = max(last, floor) / max(first, floor)
    return (GROWING if ratio >= threshold else BOUNDED), first, last, ratio


# ------------------------------------------------------------------ types

@dataclass(frozen=True)
class SlowDecreaseParams:
    """Grids for the definitional check.

    ``window_resolution`` is the number of samples per unit length inside
    each window; midpoints between consecutive zeros are always added.
    ``both_signs`` defaults to probing ``-x`` as well for non-even inputs.
    """

    a_grid: tuple = DEFAULT_A_GRID
    x_grid: tuple = DEFAULT_X_GRID
    window_resolution: int = 64
    both_signs: Optional[bool] = None
    growth_threshold: float = GROWTH_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "a_grid", _as_grid(self.a_grid, "a_grid"))
        object.__setattr__(self, "x_grid", _as_grid(self.x_grid, "x_grid"))
        if int(self.window_resolution) < 1:
            raise SlowdecError("window_resolution must be >= 1")
        object.__setattr__(self, "window_resolution", int(self.window_resolution))

    def to_dict(self):
        return {"a_grid": list(self.a_grid), "x_grid": list(self.x_grid),
                "window_resolution": self.window_resolution, "both_signs": self.both_signs,
                "growth_threshold": self.growth_threshold}


@dataclass(frozen=True)
class Verdict:
    """Outcome of one classifier with its evidence.

    ``failures`` holds ``(x, best ln|phi| over the window, threshold)``
    records at the largest grid ``a`` (definitional check) or
    ``(x, value, reference)`` records of the offending quantity.
    """

    outcome: str
    witness_a: Optional[float]
    failures: tuple
    grids: dict
    source: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"outcome": self.outcome, "witness_a": self.witness_a, "source": self.source,
                "failures": [list(f) for f in self.failures], "grids": self.grids,
                "details": self.details}


@dataclass(frozen=True)
class AsymptoticReport:
    quantity_id: str
    samples: tuple
    sup_ratio: float
    trend: str
    first_decade_sup: float = float("nan")
    last_decade_sup: float = float("nan")
    growth_ratio: float = float("nan")

    def to_dict(self):
        return {"quantity_id": self.quantity_id, "samples": [list(s) for s in self.samples],
                "sup_ratio": self.sup_ratio, "trend": self.trend,
                "first_decade_sup": self.first_decade_sup, "last_decade_sup": self.last_decade_sup,
                "growth_ratio": self.growth_ratio}


def _report(quantity_id, ts, vals, floor):
    ts = np.asarray(ts, float)
    vals = np.asarray(vals, float)
    if ts.size == 0:
        raise SlowdecError(f"no samples for {quantity_id}")
    trend, first, last, ratio = _decade_trend(ts, vals, floor)
    samples = tuple((float(t), float(v)) for t, v in zip(ts, vals))
    return AsymptoticReport(quantity_id, samples, float(np.max(vals)), trend, first, last, ratio)


@dataclass(frozen=True)
class Cond2Report:
    """Matrix of a normalized cond-2 integral over an ``(A, x)`` grid.

    ``double_limsup_estimate`` is the max over ``A`` of the sup over the
    last decade of ``x``; ``trends`` holds the decade trend for each ``A``.
    """

    quantity_id: str
    A_grid: tuple
    x_grid: tuple
    values: np.ndarray
    double_limsup_estimate: float
    trends: tuple
    growth_ratios: tuple
    bound_reference: Optional[float] = None

    def to_dict(self):
        return {"quantity_id": self.quantity_id, "A_grid": list(self.A_grid), "x_grid": list(self.x_grid),
                "values": [list(map(float, row)) for row in self.values],
                "double_limsup_estimate": self.double_limsup_estimate, "trends": list(self.trends),
                "growth_ratios": list(self.growth_ratios), "bound_reference": self.bound_reference}


def _cond2_report(quantity_id, A_grid, x_grid, values, bound_reference=None):
    xs = np.asarray(x_grid)
    trends, ratios, lasts = [], [], []
    for row in values:
        tr, _, last, ratio = _decade_trend(xs, row, FLOOR_COND2)
        trends.append(tr)
        ratios.append(ratio)
        lasts.append(last if np.isfinite(last) else float(np.max(row)))
    return Cond2Report(quantity_id, tuple(A_grid), tuple(x_grid), np.asarray(values, float),
                       float(max(lasts)), tuple(trends), tuple(ratios), bound_reference)


# ------------------------------------------------------- definitional check

def _is_even(ev):
    even = getattr(ev, "even", None)
    if even is None:
        even = ev.seq.even
    return bool(even)


def _window_samples(ev, x, w, resolution, real_axis):
    n = int(math.ceil(2.0 * w * resolution)) + 1
    pts = np.linspace(x - w, x + w, n)
    zs = ev.real_zeros_between(x - w, x + w)
    if zs.size > 1:
        pts = np.concatenate((pts, 0.5 * (zs[1:] + zs[:-1])))
    if real_axis:
        # integer points are zeros or removable points of every lattice-type fixture
        pts = pts[pts != np.round(pts)]
    return np.unique(pts)


def check_slow_decrease_def(ev, params=None, off_axis_m0=None):
    """Scan ``|phi(x')| >= (a + |x'|)^-a`` over windows ``|x - x'| <= a ln(a + |x|)``.

    For each probe ``x`` and each ``a`` the scan records the margin
    ``max (ln|phi(x')| + a ln(a + |x'|))`` and the smallest exponent
    ``e_a(x) = min max(0, -ln|phi(x')| / ln(a + |x'|))`` achievable in the
    window.  An ``a`` is a witness when every margin is nonnegative and
    ``e_a`` does not grow across the probe decades.  The outcome is
    not-slowly-decreasing when every ``a`` either fails at some probe or
    needs a growing exponent.

    With ``off_axis_m0`` the probes ``x'`` are moved to the lines
    ``x' +- 2 i m0 ln|x'|`` and the window is the disc ``|x - z'| <= a ln(a + |x|)``.
    """
    params = params or SlowDecreaseParams()
    even = _is_even(ev)
    both = params.both_signs if params.both_signs is not None else not even
    probes = list(params.x_grid) + ([-x for x in params.x_grid] if both else [])
    a_grid = np.asarray(params.a_grid)
    amax = float(a_grid[-1])

    n_a = a_grid.size
    margin = np.empty((len(probes), n_a))
    best = np.empty((len(probes), n_a))
    expo = np.empty((len(probes), n_a))
    for i, x in enumerate(probes):
        w = amax * math.log(amax + abs(x))
        if abs(x) + w + (2.0 * off_axis_m0 * math.log(abs(x) + w) if off_axis_m0 else 0.0) > ev.max_abs:
            raise RadiusError(f"probe window around x = {x:g} leaves the tail-valid region |z| <= {ev.max_abs:g}; "
                              f"required radius >= {2.0 * (abs(x) + w) * 1.1:.6g}")
        xp = _window_samples(ev, x, w, params.window_resolution, off_axis_m0 is None)
        if off_axis_m0 is None:
            pts = xp
        else:
            h = 2.0 * off_axis_m0 * np.log(np.maximum(np.abs(xp), math.e))
            pts = np.concatenate((xp + 1j * h, xp - 1j * h))
        lm = ev.log_abs_many(pts)
        f = lm.corrected
        f_lo = f - lm.corrected_bound
        dist = np.abs(pts - x)
        mod = np.abs(pts)
        for j, a in enumerate(a_grid):
            mask = dist <= a * math.log(a + abs(x))
            if not np.any(mask):
                margin[i, j], best[i, j], expo[i, j] = -np.inf, -np.inf, np.inf
                continue
            la = np.log(a + mod[mask])
            margin[i, j] = np.max(f_lo[mask] + a * la)
            best[i, j] = np.max(f[mask])
            with np.errstate(invalid="ignore"):
                expo[i, j] = np.min(np.maximum(0.0, -f_lo[mask] / la))

    xs = np.asarray(probes)
    per_a = {}
    witness = None
    all_fail = True
    for j, a in enumerate(a_grid):
        feasible = bool(np.all(margin[:, j] >= 0.0))
        trend, first, last, ratio = _decade_trend(xs, expo[:, j], FLOOR_EXPONENT, params.growth_threshold)
        per_a[f"{a:g}"] = {"feasible_everywhere": feasible, "exponent_trend": trend,
                           "exponent_first_decade": first, "exponent_last_decade": last,
                           "exponent_growth_ratio": ratio, "min_margin": float(np.min(margin[:, j]))}
        if feasible and trend != GROWING and witness is None:
            witness = float(a)
        if feasible and trend != GROWING:
            all_fail = False

    j = n_a - 1
    thresholds = -a_grid[j] * np.log(a_grid[j] + np.abs(xs))
    bad = margin[:, j] < 0.0
    if not np.any(bad) and per_a[f"{amax:g}"]["exponent_trend"] == GROWING:
        bad = np.abs(xs) >= np.abs(xs).max() / 10.0 * (1 - 1e-9)
    failures = tuple((float(x), float(b), float(t)) for x, b, t, k in zip(xs, best[:, j], thresholds, bad) if k)

    if witness is not None:
        outcome = SLOWLY_DECREASING
    elif all_fail:
        outcome = NOT_SLOWLY_DECREASING
    else:
        outcome = INCONCLUSIVE
    samples = [{"x": float(x), "best_log_abs": [float(v) for v in best[i]],
                "margin": [float(v) for v in margin[i]], "exponent": [float(v) for v in expo[i]]}
               for i, x in enumerate(xs)]
    grids = params.to_dict()
    if off_axis_m0 is not None:
        grids["off_axis_m0"] = float(off_axis_m0)
    return Verdict(outcome, witness, failures, grids, "definition",
                   {"per_a": per_a, "samples": samples})


# ------------------------------------------------ local cluster size

def _unit_disc_counts_complex(seq):
    """``m(mu, 1)`` for every zero ``mu``: zeros within distance 1, with multiplicity."""
    order = np.argsort(seq.values.real, kind="stable")
    v = seq.values[order]
    m = seq.multiplicities[order]
    re = v.real
    hi = np.searchsorted(re, re + 1.0, side="right")
    span = int(np.max(hi - np.arange(v.size))) if v.size else 0
    counts = m.astype(np.int64).copy()
    for k in range(1, span):
        a, b = v[:-k], v[k:]
        close = np.abs(a - b) <= 1.0
        counts[:-k] += np.where(close, m[k:], 0)
        counts[k:] += np.where(close, m[:-k], 0)
    out = np.empty_like(counts)
    out[order] = counts
    return out


def check_lemma2(seq, x_grid=DEFAULT_X_GRID):
    """Samples of ``m(x, 1) / ln|x|`` at the grid and at the densest disc of every decade.

    Real mode counts zeros in ``[x - 1, x + 1]``; the densest disc of a
    decade is found by sliding ``[lambda, lambda + 2]`` over its zeros.  For
    complex sequences the discs are centred at the zeros themselves.
    """
    xs = _as_grid(x_grid, "x_grid")
    if xs[0] <= 1.0:
        raise SlowdecError("x_grid must start above 1")
    if xs[-1] + 1.0 > seq.radius:
        raise RadiusError(f"x_grid reaches {xs[-1]:g}; required radius >= {xs[-1] + 1.0:g}")
    edges = [xs[0]]
    while edges[-1] * 10.0 < xs[-1] * (1 - 1e-9):
        edges.append(edges[-1] * 10.0)
    edges.append(xs[-1])
    ts, vals = [], []
    if seq.is_real:
        grid = np.asarray(xs)
        signs = (1.0,) if seq.even else (1.0, -1.0)
        for s in signs:
            g = s * grid
            cnt = seq.count_le(g + 1.0) - seq.count_lt(g - 1.0)
            ts.extend(g.tolist())
            vals.extend((cnt / np.log(grid)).tolist())
            for lo, hi in zip(edges, edges[1:]):
                a, b = (lo - 1.0, hi - 1.0) if s > 0 else (-hi - 1.0, -lo - 1.0)
                lam = seq.real_zeros_between(a, b)
                if lam.size == 0:
                    continue
                cnt = seq.count_le(lam + 2.0) - seq.count_lt(lam)
                r = cnt / np.log(np.abs(lam + 1.0))
                k = int(np.argmax(r))
                ts.append(float(lam[k] + 1.0))
                vals.append(float(r[k]))
    else:
        counts = _unit_disc_counts_complex(seq)
        mod = seq.moduli
        for lo, hi in zip(edges, edges[1:]):
            sel = np.flatnonzero((mod >= lo) & (mod <= hi))
            if sel.size == 0:
                continue
            r = counts[sel] / np.log(mod[sel])
            k = int(np.argmax(r))
            ts.append(float(mod[sel][k]))
            vals.append(float(r[k]))
        for x in xs:
            near = np.abs(seq.values - x) <= 1.0
            ts.append(float(x))
            vals.append(float(seq.multiplicities[near].sum() / math.log(x)))
    order = np.argsort(np.abs(ts), kind="stable")
    return _report("m(x,1)/ln|x|", np.asarray(ts)[order], np.asarray(vals)[order], FLOOR_LEMMA2)


# ------------------------------------------- counting deviation L(t)

def _delta(seq, delta=None):
    if delta is not None:
        return float(delta)
    try:
        return density_estimate(seq)
    except SlowdecError as exc:
        raise SlowdecError(f"density missing and not estimable: {exc}") from None


def check_theorem1(seq, delta=None, t_grid=DEFAULT_X_GRID):
    """Samples of ``|nu(t) - Delta t| / ln^2|t|`` for both signs of ``t``.

    ``nu`` is evaluated at ``t`` and at ``t`` shifted by a relative ``1e-9``
    either way; the worst of the three is kept, so a zero sitting on a grid
    point cannot hide a jump.
    """
    if not seq.is_real:
        raise SlowdecError("check_theorem1 needs a real-mode sequence (see project_real)")
    ts = np.asarray(_as_grid(t_grid, "t_grid"))
    if ts[-1] * (1 + 1e-9) > seq.radius:
        raise RadiusError(f"t_grid reaches {ts[-1]:g}; required radius >= {ts[-1] * (1 + 1e-9):.6g}")
    d = _delta(seq, delta)
    tt = np.concatenate((ts, -ts))
    dev = np.zeros(tt.shape)
    for f in (1.0 - 1e-9, 1.0, 1.0 + 1e-9):
        dev = np.maximum(dev, np.abs(nu(seq, tt * f) - d * tt))
    vals = dev / np.log(np.abs(tt)) ** 2
    order = np.argsort(np.abs(tt), kind="stable")
    return _report("|nu(t)-Delta t|/ln^2|t|", tt[order], vals[order], FLOOR_THEOREM1)


# -------------------------------------------------- even criterion

def _clip_log(r, a, b):
    return np.log(np.clip(r, a, b))


def _prefix(seq, r):
    k = int(np.searchsorted(seq.moduli, r, side="right"))
    return seq.values[:k], seq.multiplicities[:k].astype(float)


def cond2_quantity(seq, A, x):
    """``(1/(A ln x)) |int_{A ln x}^{x ln x} (n(0,t) - n(x + iA ln x, t)) / t dt|``.

    Each zero ``lambda`` contributes ``ln clip|lambda - w| - ln clip|lambda|``
    with ``w = x + iA ln x`` and both distances clipped to the range.
    """
    if not (A > 0 and x > 1):
        raise SlowdecError("cond2_quantity needs A > 0 and x > 1")
    lx = math.log(x)
    a, b = A * lx, x * lx
    if a >= b:
        return 0.0
    w = complex(x, a)
    need = b + abs(w)
    if need > seq.radius:
        raise RadiusError(f"cond-2 integral at x = {x:g}, A = {A:g} needs radius >= {need:.6g}")
    lam, m = _prefix(seq, need)
    terms = m * (_clip_log(np.abs(lam - w), a, b) - _clip_log(np.abs(lam), a, b))
    return abs(float(np.sum(terms))) / a


def required_radius(criterion, x_grid=DEFAULT_X_GRID, A_grid=DEFAULT_COND2_A_GRID, a_grid=DEFAULT_A_GRID):
    """Smallest materialization radius a criterion needs for the given grids."""
    xm = max(x_grid)
    lx = math.log(xm)
    if criterion == "theorem2":
        return xm * lx + abs(complex(xm, max(A_grid) * lx))
    if criterion == "theorem3":
        return xm * lx + xm
    if criterion == "definition":
        am = max(a_grid)
        return 2.0 * (xm + am * math.log(am + xm))
    raise SlowdecError(f"unknown criterion {criterion!r}")


def _check_radius(seq, criterion, x_grid, A_grid):
    need = required_radius(criterion, x_grid, A_grid)
    if need > seq.radius:
        raise RadiusError(f"{criterion} on x_grid up to {max(x_grid):g} needs radius >= {need:.6g}, "
                          f"sequence is materialized to {seq.radius:g}")


def _combine(reports, cond2, source, grids):
    """Growing necessary quantity or any growing cond-2 row -> negative verdict."""
    failures = []
    for rep in reports:
        if rep.trend == GROWING:
            cut = max(abs(t) for t, _ in rep.samples) / 10.0 * (1 - 1e-9)
            failures.extend((t, v, rep.first_decade_sup) for t, v in rep.samples if abs(t) >= cut)
    for A, row, tr in zip(cond2.A_grid, cond2.values, cond2.trends):
        if tr == GROWING:
            cut = max(cond2.x_grid) / 10.0 * (1 - 1e-9)
            failures.extend((x, float(v), float(A)) for x, v in zip(cond2.x_grid, row) if x >= cut)
    trends = [r.trend for r in reports] + list(cond2.trends)
    if GROWING in trends:
        outcome = NOT_SLOWLY_DECREASING
    elif all(t == BOUNDED for t in trends):
        outcome = SLOWLY_DECREASING
    else:
        outcome = INCONCLUSIVE
    details = {r.quantity_id: {"trend": r.trend, "growth_ratio": r.growth_ratio} for r in reports}
    details["cond2"] = {f"{A:g}": t for A, t in zip(cond2.A_grid, cond2.trends)}
    return Verdict(outcome, None, tuple(failures), grids, source, details)


def check_theorem2(seq, A_grid=DEFAULT_COND2_A_GRID, x_grid=DEFAULT_X_GRID, delta=None):
    """Criterion for even real sequences.

    Returns ``(verdict, theorem1_report, cond2_report)``; the cluster-size report
    is folded into ``verdict.details`` and gates the outcome as a necessary
    condition.
    """
    if not seq.is_real or not seq.even:
        raise SlowdecError("check_theorem2 needs an even real-mode sequence")
    A_grid = _as_grid(A_grid, "A_grid")
    x_grid = _as_grid(x_grid, "x_grid")
    _check_radius(seq, "theorem2", x_grid, A_grid)
    d = _delta(seq, delta)
    lem2 = check_lemma2(seq, x_grid)
    thm1 = check_theorem1(seq, d, x_grid)
    values = np.array([[cond2_quantity(seq, A, x) for x in x_grid] for A in A_grid])
    cond2 = _cond2_report("cond2", A_grid, x_grid, values, math.pi * d)
    grids = {"A_grid": list(A_grid), "x_grid": list(x_grid), "delta": d}
    verdict = _combine([lem2, thm1], cond2, "theorem2", grids)
    verdict.details["lemma2_report"] = lem2.to_dict()
    return verdict, thm1, cond2


# ------------------------------------------------ general criterion

def cond2_3_quantity(seq, A, x, delta=None):
    """``(1/(A ln x)) |int_{A ln x}^{x ln x} (2L*(t) - L*(x+r) + L*(x-r)) / t dt|``.

    ``r = sqrt(t^2 - A^2 ln^2 x)`` and ``L*(s) = sign(s) (n(0,|s|) - 2 Delta |s|)``.
    Each counting term ``n(0, g(t))`` with monotone ``g`` switches at the
    time ``t`` where ``g(t) = |lambda|``, so the integral is a sum of
    clipped logarithms; the ``Delta`` part integrates in closed form.
    """
    if not seq.is_real:
        raise SlowdecError("cond2_3_quantity needs a real-mode sequence")
    if not (A > 0 and x > 1):
        raise SlowdecError("cond2_3_quantity needs A > 0 and x > 1")
    lx = math.log(x)
    y, b = A * lx, x * lx
    if y >= b:
        return 0.0
    need = x + b
    if need > seq.radius:
        raise RadiusError(f"cond-2-3 integral at x = {x:g}, A = {A:g} needs radius >= {need:.6g}")
    d = _delta(seq, delta)
    lam, m = _prefix(seq, need)
    mod = np.abs(lam)
    lb = math.log(b)
    t1 = np.hypot(np.maximum(mod - x, 0.0), y)  # |lambda| <= x + r
    t2 = np.hypot(x - mod, y)  # |lambda| <= x - r, while r < x
    t3 = np.hypot(mod + x, y)  # |lambda| <= r - x, while r > x
    counting = (2.0 * (lb - _clip_log(mod, y, b))
                - (lb - _clip_log(t1, y, b))
                + np.where(mod <= x, _clip_log(t2, y, b) - math.log(y), 0.0)
                - (lb - _clip_log(t3, y, b)))
    rb = math.sqrt(b * b - y * y)
    linear = -4.0 * d * ((b - rb + y * math.acos(y / b)) - y)
    return abs(float(np.sum(m * counting)) + linear) / y


def check_theorem3(seq, A_grid=DEFAULT_COND2_A_GRID, x_grid=DEFAULT_X_GRID, delta=None):
    """Criterion for real sequences that need not be even.

    Returns ``(verdict, theorem1_report, cond2_3_report)`` like :func:`check_theorem2`.
    """
    if not seq.is_real:
        raise SlowdecError("check_theorem3 needs a real-mode sequence (see project_real)")
    A_grid = _as_grid(A_grid, "A_grid")
    x_grid = _as_grid(x_grid, "x_grid")
    _check_radius(seq, "theorem3", x_grid, A_grid)
    d = _delta(seq, delta)
    lem2 = check_lemma2(seq, x_grid)
    thm1 = check_theorem1(seq, d, x_grid)
    values = np.array([[cond2_3_quantity(seq, A, x, d) for x in x_grid] for A in A_grid])
    cond2 = _cond2_report("cond2-3", A_grid, x_grid, values)
    grids = {"A_grid": list(A_grid), "x_grid": list(x_grid), "delta": d}
    verdict = _combine([lem2, thm1], cond2, "theorem3", grids)
    verdict.details["lemma2_report"] = lem2.to_dict()
    return verdict, thm1, cond2


# ------------------------------------------- integral diagnostics

@dataclass(frozen=True)
class Diagnostic:
    value: float
    normalizer: float
    tail_estimate: float
    params: dict

    @property
    def ratio(self):
        return self.value / self.normalizer

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"value": self.value, "normalizer": self.normalizer, "ratio": self.ratio,
                "tail_estimate": self.tail_estimate, "params": self.params}


def lemma3_diagnostic(seq, x, T, delta=None):
    """``int_{x ln x}^{T} (n+(t; x) - n-(t; x)) / t dt`` with ``T`` standing in for infinity.

    ``n+(t; x)`` counts zeros in ``(t, t + x]`` and ``n-(t; x)`` those in
    ``(t - x, t]``.  A zero ``lambda`` contributes
    ``2 ln c(lambda) - ln c(lambda - x) - ln c(lambda + x)`` with ``c``
    clipping to ``[x ln x, T]``.  The tail beyond ``T`` is estimated as
    ``sup|L| (3x/T + x^2/T^2)`` with ``sup|L|`` taken over ``[T/2, T]``.
    """
    if not seq.is_real:
        raise SlowdecError("lemma3_diagnostic needs a real-mode sequence")
    if not x > 1:
        raise SlowdecError("lemma3_diagnostic needs x > 1")
    lx = math.log(x)
    a = x * lx
    params = {"x": float(x), "T": float(T)}
    if T <= a:
        return Diagnostic(0.0, lx, 0.0, params)
    if T + x > seq.radius:
        raise RadiusError(f"shift-difference integral up to T = {T:g} needs radius >= {T + x:.6g}")
    lam, m = _prefix(seq, T + x)
    lam = lam.real
    terms = m * (2.0 * _clip_log(lam, a, T) - _clip_log(lam - x, a, T) - _clip_log(lam + x, a, T))
    d = _delta(seq, delta)
    zs = seq.real_zeros_between(T / 2.0, T)
    probe = np.concatenate((zs, zs * (1 - 1e-12), [T / 2.0, T]))
    lsup = float(np.max(np.abs(nu(seq, probe) - d * probe)))
    tail = lsup * (3.0 * x / T + (x / T) ** 2)
    return Diagnostic(float(np.sum(terms)), lx, tail, params)


def lemma4_diagnostic(seq, x, A, delta=None):
    """``int_{|x| ln|x|}^inf (n(x,t) - n(x + iA ln|x|, t)) / t dt`` over the materialized zeros.

    A zero at distance ``d`` from ``x`` contributes
    ``ln max(sqrt(d^2 + y^2), b) - ln max(d, b)`` with ``y = A ln|x|`` and
    ``b = |x| ln|x|``.  Zeros beyond the radius add about
    ``Delta y^2 / (R - |x|)``, reported as the tail estimate.
    """
    if not seq.is_real:
        raise SlowdecError("lemma4_diagnostic needs a real-mode sequence")
    if not (abs(x) > 1 and A > 0):
        raise SlowdecError("lemma4_diagnostic needs |x| > 1 and A > 0")
    lx = math.log(abs(x))
    y, b = A * lx, abs(x) * lx
    if abs(x) + b > seq.radius:
        raise RadiusError(f"vertical-shift integral at x = {x:g} needs radius >= {abs(x) + b:.6g}")
    dist = np.abs(seq.values - x)
    m = seq.multiplicities.astype(float)
    far = dist >= b
    with np.errstate(divide="ignore"):
        terms = np.where(far, 0.5 * np.log1p((y / np.where(far, dist, 1.0)) ** 2),
                         np.maximum(0.5 * np.log(dist * dist + y * y) - math.log(b), 0.0))
    d = _delta(seq, delta)
    tail = d * y * y / (seq.radius - abs(x))
    return Diagnostic(float(np.sum(m * terms)), A * A, tail, {"x": float(x), "A": float(A)})


# -------------------------------------------- projection to the axis

@dataclass(frozen=True)
class LemmaOneReport:
    projected: Verdict
    original: Verdict
    agree: bool
    m0: float
    projected_radius: float

    def to_dict(self):
        return {"projected": self.projected.to_dict(), "original": self.original.to_dict(),
                "agree": self.agree, "m0": self.m0, "projected_radius": self.projected_radius}


def _default_evaluator(seq):
    return ProductEvaluator(seq, pairing="even" if seq.even else "principal")


def _trim(x_grid, limit_fn, radius):
    g = tuple(x for x in x_grid if limit_fn(x) <= radius)
    if len(g) < 2:
        raise RadiusError(f"radius {radius:g} leaves fewer than two grid points")
    return g


def lemma1_consistency(seq, params=None, A_grid=DEFAULT_COND2_A_GRID, x_grid=None):
    """Classify the real projection via the general criterion and the original on off-axis probes.

    The original verdict is negative as soon as the unit-disc counts around
    its zeros grow faster than ``ln|mu|`` (the cluster-size condition, which
    survives the projection); otherwise it is the definitional scan on the
    lines ``x +- 2 i m0 ln|x|``.
    """
    params = params or SlowDecreaseParams()
    if seq.is_real:
        verdict, _, _ = check_theorem3(seq, A_grid, x_grid or params.x_grid)
        return LemmaOneReport(verdict, verdict, True, 0.0, seq.radius)
    proj = project_real(seq)
    xg = x_grid or _trim(params.x_grid, lambda x: required_radius("theorem3", (x,), A_grid), proj.radius)
    projected, _, _ = check_theorem3(proj, A_grid, xg)
    lem2 = check_lemma2(seq, params.x_grid)
    if lem2.trend == GROWING:
        cut = max(abs(t) for t, _ in lem2.samples) / 10.0 * (1 - 1e-9)
        failures = tuple((t, v, lem2.first_decade_sup) for t, v in lem2.samples if abs(t) >= cut)
        original = Verdict(NOT_SLOWLY_DECREASING, None, failures, params.to_dict(), "lemma2",
                           {"lemma2_report": lem2.to_dict()})
    else:
        original = check_slow_decrease_def(_default_evaluator(seq), params, off_axis_m0=seq.m0)
        original.details["lemma2_report"] = lem2.to_dict()
    return LemmaOneReport(projected, original, projected.outcome == original.outcome, float(seq.m0), proj.radius)


# ---------------------------------------------------------------- classify

@dataclass(frozen=True)
class Classification:
    """Combined verdict of the definitional scan and the matching criterion.

    The outcome is the common outcome when both agree and inconclusive
    otherwise; ``witness_a`` comes from the definitional scan.
    """

    outcome: str
    witness_a: Optional[float]
    definition: Verdict
    criterion: Verdict
    criterion_name: str
    theorem1: Optional[AsymptoticReport] = None
    cond2: Optional[Cond2Report] = None
    lemma1: Optional[LemmaOneReport] = None

    def to_dict(self):
        return {"outcome": self.outcome, "witness_a": self.witness_a, "criterion_name": self.criterion_name,
                "definition": self.definition.to_dict(), "criterion": self.criterion.to_dict(),
                "theorem1": self.theorem1.to_dict() if self.theorem1 else None,
                "cond2": self.cond2.to_dict() if self.cond2 else None,
                "lemma1": self.lemma1.to_dict() if self.lemma1 else None}


def classify(seq, params=None, A_grid=DEFAULT_COND2_A_GRID, x_grid=None, evaluator=None, delta=None):
    """Run the definitional scan and the even criterion (even input) or the general one.

    Without an explicit ``x_grid`` the criterion grid is the definitional
    grid trimmed to what the materialization radius supports; the grid
    actually used is recorded in the verdict.  Complex sequences go
    through :func:`lemma1_consistency`.
    """
    params = params or SlowDecreaseParams()
    if not seq.is_real:
        rep = lemma1_consistency(seq, params, A_grid, x_grid)
        outcome = rep.projected.outcome if rep.agree else INCONCLUSIVE
        witness = rep.original.witness_a if outcome == SLOWLY_DECREASING else None
        return Classification(outcome, witness, rep.original, rep.projected, "lemma1", lemma1=rep)
    ev = evaluator or _default_evaluator(seq)
    definition = check_slow_decrease_def(ev, params)
    name = "theorem2" if seq.even else "theorem3"
    xg = x_grid or _trim(params.x_grid, lambda x: required_radius(name, (x,), A_grid), seq.radius)
    check = check_theorem2 if seq.even else check_theorem3
    criterion, thm1, cond2 = check(seq, A_grid, xg, delta)
    outcome = criterion.outcome if criterion.outcome == definition.outcome else INCONCLUSIVE
    witness = definition.witness_a if outcome == SLOWLY_DECREASING else None
    return Classification(outcome, witness, definition, criterion, name, thm1, cond2)
