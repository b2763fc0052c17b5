"""Zero sequences, their generators and the counting functions built on them.

A :class:`ZeroSequence` is a finite, *complete* materialization of an
infinite zero set: every zero of modulus at most ``radius`` is present.
Coincident zeros are stored once with a multiplicity.  Points are ordered
by modulus, ties broken by argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from .exceptions import GeneratorError, RadiusError, SlowdecError

__all__ = [
    "ZeroPoint",
    "ZeroSequence",
    "SequenceSpec",
    "CountingSnapshot",
    "OFFSET_FUNCTIONS",
    "build_sequence",
    "from_points",
    "nu",
    "counting_snapshot",
    "n_plus",
    "n_minus",
    "density_estimate",
    "project_real",
]


OFFSET_FUNCTIONS = {
    "log1p_sq": lambda t: np.log1p(np.square(t)),  # ln(1 + t^2)
    "log_sq": lambda t: np.square(np.log(t)),  # ln^2 t
    "log1p": np.log1p,  # ln(1 + t)
}


@dataclass(frozen=True)
class ZeroPoint:
    value: complex
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise SlowdecError(f"multiplicity must be >= 1, got {self.multiplicity}")
        if self.value == 0:
            raise SlowdecError("zero sequences must not contain the origin")


def _merge_coincident(values, mults, how="sum"):
    """Merge exactly equal values, combining multiplicities with sum or max."""
    if values.size == 0:
        return values, mults
    order = np.lexsort((values.imag, values.real)) if np.iscomplexobj(values) else np.argsort(values, kind="stable")
    v = values[order]
    m = mults[order]
    starts = np.flatnonzero(np.r_[True, v[1:] != v[:-1]])
    if how == "sum":
        merged = np.add.reduceat(m, starts)
    else:
        merged = np.maximum.reduceat(m, starts)
    return v[starts], merged


def _order_by_modulus(values, mults):
    order = np.lexsort((np.angle(values), np.abs(values)))
    return values[order], mults[order]


@dataclass(frozen=True, eq=False)
class ZeroSequence:
    """Finite materialization of a zero set, complete up to ``radius``.

    Parameters
    ----------
    values : ndarray
        Distinct zeros, float64 (real mode) or complex128 (complex mode),
        sorted by nondecreasing modulus.
    multiplicities : ndarray of int
        Multiplicity of each value.
    radius : float
        Every zero of modulus <= radius is present.
    density : float or None
        Exact density ``Delta`` (``2 Delta = lim j / |lambda_j|``) when known.
    even : bool
        Closed under negation with equal multiplicities.
    m0 : float
        Recorded constant with ``|Im mu| <= m0 * ln max(e, |mu|)``.
    """

    values: np.ndarray
    multiplicities: np.ndarray
    radius: float
    density: Optional[float] = None
    even: bool = False
    m0: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if np.iscomplexobj(values) and np.all(values.imag == 0):
            values = values.real.copy()
        values = values.astype(complex if np.iscomplexobj(values) else float)
        mults = np.asarray(self.multiplicities, dtype=np.int64)
        if values.shape != mults.shape or values.ndim != 1:
            raise SlowdecError("values and multiplicities must be 1-d arrays of equal length")
        if not self.radius > 0:
            raise SlowdecError("radius must be positive")
        if np.any(values == 0):
            raise SlowdecError("zero sequences must not contain the origin")
        if np.any(mults < 1):
            raise SlowdecError("multiplicities must be >= 1")
        mod = np.abs(values)
        if np.any(np.diff(mod) < 0):
            raise SlowdecError("values must be sorted by nondecreasing modulus")
        if np.any(mod > self.radius * (1 + 1e-12)):
            raise SlowdecError("values beyond the materialization radius")
        if self.density is not None and self.density < 0:
            raise SlowdecError("density must be nonnegative")
        values.setflags(write=False)
        mults.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "multiplicities", mults)
        object.__setattr__(self, "radius", float(self.radius))
        if self.even and not self._is_symmetric():
            raise SlowdecError("even flag set but the sequence is not closed under negation")

    def _is_symmetric(self):
        v, m = _merge_coincident(self.values, self.multiplicities)
        w, n = _merge_coincident(-self.values, self.multiplicities)
        return v.shape == w.shape and bool(np.all(v == w) and np.all(m == n))

    def __len__(self):
        return self.values.size

    def __repr__(self):
        mode = "real" if self.is_real else "complex"
        return (
            f"ZeroSequence({self.label or mode}, n={len(self)}, radius={self.radius:g}, "
            f"density={self.density}, even={self.even})"
        )

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values)

    @property
    def total_multiplicity(self):
        return int(self.multiplicities.sum())

    @property
    def points(self):
        return tuple(ZeroPoint(complex(v) if not self.is_real else float(v), int(m))
                     for v, m in zip(self.values, self.multiplicities))

    @cached_property
    def moduli(self):
        return np.abs(self.values)

    @cached_property
    def _line(self):
        """Real parts sorted ascending with cumulative multiplicity (real mode)."""
        if not self.is_real:
            raise SlowdecError("operation requires a real-mode sequence")
        order = np.argsort(self.values, kind="stable")
        xs = self.values[order]
        cum = np.concatenate(([0], np.cumsum(self.multiplicities[order])))
        return xs, cum

    def count_le(self, u):
        """Number of zeros (with multiplicity) in ``(-inf, u]``; real mode."""
        xs, cum = self._line
        return cum[np.searchsorted(xs, u, side="right")]

    def count_lt(self, u):
        xs, cum = self._line
        return cum[np.searchsorted(xs, u, side="left")]

    def within(self, r):
        """Restriction to zeros of modulus <= r (a prefix)."""
        k = int(np.searchsorted(self.moduli, r, side="right"))
        return ZeroSequence(self.values[:k], self.multiplicities[:k], min(r, self.radius),
                            self.density, self.even, self.m0, self.label)

    def real_zeros_between(self, lo, hi):
        """Sorted distinct real zeros in [lo, hi]."""
        xs, _ = self._line
        return xs[np.searchsorted(xs, lo, "left"):np.searchsorted(xs, hi, "right")]


def from_points(values, multiplicities=None, radius=None, density=None, even=None, m0=None, label=""):
    """Build a sorted, merged :class:`ZeroSequence` from raw points.

    ``radius`` defaults to the largest modulus (the list is taken to be the
    whole zero set up to its last point).  ``radius=inf`` declares the list
    to be the entire zero set, as for a polynomial.
    """
    values = np.asarray(values)
    if values.dtype.kind not in "fc":
        values = values.astype(complex if values.dtype.kind == "O" else float)
    values = np.atleast_1d(values)
    mults = np.ones(values.shape, dtype=np.int64) if multiplicities is None else np.asarray(multiplicities, dtype=np.int64)
    if np.any(values == 0):
        raise GeneratorError("explicit list contains 0")
    values, mults = _merge_coincident(values, mults)
    values, mults = _order_by_modulus(values, mults)
    if radius is None:
        radius = float(np.abs(values).max()) if values.size else 1.0
    if np.iscomplexobj(values) and np.any(values.imag != 0):
        if m0 is None:
            m0 = _record_m0(values)
    else:
        values = values.real
        m0 = 0.0 if m0 is None else m0
    seq = ZeroSequence(values, mults, radius, density, False, m0, label)
    if even is None:
        even = seq._is_symmetric()
    if even:
        seq = ZeroSequence(values, mults, radius, density, True, m0, label)
    return seq


def _record_m0(values):
    mod = np.abs(values)
    return float(np.max(np.abs(values.imag) / np.log(np.maximum(math.e, mod)))) if values.size else 0.0


# --------------------------------------------------------------------------
# Specifications and generators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceSpec:
    """Declarative description of a zero sequence.

    ``kind`` is one of ``explicit``, ``lattice``, ``perturbed``,
    ``lacunary``, ``exp-sqrt``, ``complex-perturbed`` (leaves) or
    ``union``, ``even-closure`` (combinators over ``children``).
    """

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "children", tuple(self.children))
        _validate_spec(self)

    def to_dict(self):
        out = {"kind": self.kind}
        out.update({k: _plain(v) for k, v in sorted(self.params.items())})
        if self.kind == "union":
            out["parts"] = [c.to_dict() for c in self.children]
        elif self.kind == "even-closure":
            out["of"] = self.children[0].to_dict()
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, Mapping) or "kind" not in data:
            raise GeneratorError("sequence spec must be a mapping with a 'kind' key")
        data = dict(data)
        kind = data.pop("kind")
        children = ()
        if kind == "union":
            parts = data.pop("parts", None)
            if not isinstance(parts, list) or len(parts) < 2:
                raise GeneratorError("union needs a 'parts' list with at least two specs")
            children = tuple(cls.from_dict(p) for p in parts)
        elif kind == "even-closure":
            if "of" not in data:
                raise GeneratorError("even-closure needs an 'of' spec")
            children = (cls.from_dict(data.pop("of")),)
        return cls(kind, data, children)

    def __hash__(self):
        import json
        return hash(json.dumps(self.to_dict(), sort_keys=True))


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    return v


_LEAF_PARAMS = {
    "explicit": {"values", "multiplicities"},
    "lattice": {"shift", "exclude_powers_of"},
    "perturbed": {"offset", "symmetric"},
    "lacunary": {"ratio", "even"},
    "exp-sqrt": {"even"},
    "complex-perturbed": {"imag_offset", "inflate"},
    "union": set(),
    "even-closure": set(),
}


def _validate_spec(spec):
    if spec.kind not in _LEAF_PARAMS:
        raise GeneratorError(f"unknown generator kind {spec.kind!r}")
    unknown = set(spec.params) - _LEAF_PARAMS[spec.kind]
    if unknown:
        raise GeneratorError(f"{spec.kind}: unknown parameters {sorted(unknown)}")
    p = spec.params
    if spec.kind == "union" and len(spec.children) < 2:
        raise GeneratorError("union needs at least two children")
    if spec.kind == "even-closure" and len(spec.children) != 1:
        raise GeneratorError("even-closure needs exactly one child")
    if spec.kind in ("union", "even-closure"):
        return
    if spec.children:
        raise GeneratorError(f"{spec.kind} takes no child specs")
    if spec.kind == "explicit":
        if "values" not in p or len(p["values"]) == 0:
            raise GeneratorError("explicit: 'values' must be a nonempty list")
        vals = _parse_values(p["values"])
        if np.any(vals == 0):
            raise GeneratorError("explicit list contains 0")
        if "multiplicities" in p:
            m = np.asarray(p["multiplicities"])
            if m.shape != vals.shape or np.any(m < 1) or np.any(m != np.round(m)):
                raise GeneratorError("explicit: multiplicities must be positive integers, one per value")
    elif spec.kind == "lattice":
        if not math.isfinite(float(p.get("shift", 0.0))):
            raise GeneratorError("lattice: shift must be finite")
        b = p.get("exclude_powers_of", 0)
        if b not in (0, None) and (int(b) != b or b < 2):
            raise GeneratorError("lattice: exclude_powers_of must be an integer >= 2 (or 0)")
    elif spec.kind == "perturbed":
        if p.get("offset") not in ("log1p_sq", "log_sq"):
            raise GeneratorError("perturbed: offset must be 'log1p_sq' or 'log_sq'")
    elif spec.kind == "lacunary":
        q = p.get("ratio")
        if q is None or not float(q) > 1:
            raise GeneratorError("lacunary: ratio q must be > 1")
    elif spec.kind == "complex-perturbed":
        if p.get("imag_offset") not in OFFSET_FUNCTIONS:
            raise GeneratorError(f"complex-perturbed: imag_offset must be one of {sorted(OFFSET_FUNCTIONS)}")


def _parse_values(raw):
    out = []
    for v in raw:
        if isinstance(v, (list, tuple)):
            out.append(complex(float(v[0]), float(v[1])))
        elif isinstance(v, str):
            out.append(complex(v.replace(" ", "").replace("i", "j")))
        else:
            out.append(v)
    arr = np.asarray(out)
    return arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)


# each generator returns (values, mults, density, one_sided_positive)

def _gen_explicit(p, radius):
    vals = _parse_values(p["values"])
    mults = np.asarray(p.get("multiplicities", np.ones(vals.shape)), dtype=np.int64)
    keep = np.abs(vals) <= radius
    pos = bool(np.all(vals.real > 0))
    return vals[keep], mults[keep], None, pos


def _gen_lattice(p, radius):
    shift = float(p.get("shift", 0.0))
    n = int(math.ceil(radius + abs(shift))) + 1
    j = np.arange(-n, n + 1, dtype=float)
    vals = j + shift
    keep = (vals != 0) & (np.abs(vals) <= radius)
    b = int(p.get("exclude_powers_of", 0) or 0)
    if b:
        k_max = int(math.log(max(radius, b), b)) + 2
        powers = np.array([float(b) ** k for k in range(1, k_max + 1)])
        keep &= ~np.isin(np.abs(vals), powers)
    vals = vals[keep]
    return vals, np.ones(vals.shape, dtype=np.int64), 1.0, False


def _gen_perturbed(p, radius):
    f = OFFSET_FUNCTIONS[p["offset"]]
    symmetric = bool(p.get("symmetric", False))
    j_pos = np.arange(1, int(math.floor(radius)) + 2, dtype=float)
    pos = j_pos + f(j_pos)
    if symmetric:
        vals = np.concatenate((pos, -pos))
    else:
        # negative index: -j + f(j); its modulus j - f(j) may stay below radius for j > radius
        j_hi = int(math.ceil(radius + float(f(4.0 * radius + 100.0)))) + 2
        j_neg = np.arange(1, j_hi + 1, dtype=float)
        vals = np.concatenate((pos, -j_neg + f(j_neg)))
    vals = vals[(np.abs(vals) <= radius) & (vals != 0)]
    return vals, np.ones(vals.shape, dtype=np.int64), 1.0, False


def _gen_lacunary(p, radius):
    q = float(p["ratio"])
    pts = []
    v = q
    while v <= radius:
        pts.append(v)
        v *= q
    pos = np.asarray(pts, dtype=float)
    even = bool(p.get("even", True))
    vals = np.concatenate((pos, -pos)) if even else pos
    return vals, np.ones(vals.shape, dtype=np.int64), 0.0, not even


def _gen_exp_sqrt(p, radius):
    j_max = int(math.floor(math.log(radius) ** 2)) if radius > 1 else 0
    j = np.arange(1, j_max + 2, dtype=float)
    pos = np.exp(np.sqrt(j))
    pos = pos[pos <= radius]
    even = bool(p.get("even", True))
    vals = np.concatenate((pos, -pos)) if even else pos
    return vals, np.ones(vals.shape, dtype=np.int64), 0.0, not even


def _gen_complex_perturbed(p, radius):
    g = OFFSET_FUNCTIONS[p["imag_offset"]]
    j = np.arange(1, int(math.floor(radius)) + 1, dtype=float)
    vals = j + 1j * g(j)
    mults = np.ones(j.shape, dtype=np.int64)
    if p.get("inflate", False):
        k = 1
        while 2 ** k <= j.size:
            mults[2 ** k - 1] = math.ceil((k * math.log(2)) ** 2)
            k += 1
    keep = np.abs(vals) <= radius
    return vals[keep], mults[keep], 0.5, True


_GENERATORS = {
    "explicit": _gen_explicit,
    "lattice": _gen_lattice,
    "perturbed": _gen_perturbed,
    "lacunary": _gen_lacunary,
    "exp-sqrt": _gen_exp_sqrt,
    "complex-perturbed": _gen_complex_perturbed,
}


def _generate(spec, radius):
    if spec.kind == "union":
        parts = [_generate(c, radius) for c in spec.children]
        vals = np.concatenate([pt[0].astype(complex) for pt in parts])
        mults = np.concatenate([pt[1] for pt in parts])
        dens = None if any(pt[2] is None for pt in parts) else sum(pt[2] for pt in parts)
        return vals, mults, dens, all(pt[3] for pt in parts)
    if spec.kind == "even-closure":
        vals, mults, dens, pos = _generate(spec.children[0], radius)
        vals = vals.astype(complex)
        both = np.concatenate((vals, -vals))
        bm = np.concatenate((mults, mults))
        vals, mults = _merge_coincident(both, bm, how="max")
        if dens is not None:
            if pos:
                dens = 2.0 * dens
            elif not _symmetric_raw(vals, mults):
                dens = None
        return vals, mults, dens, False
    return _GENERATORS[spec.kind](spec.params, radius)


def _symmetric_raw(vals, mults):
    a, m = _merge_coincident(vals, mults)
    b, n = _merge_coincident(-vals, mults)
    return a.shape == b.shape and bool(np.all(a == b) and np.all(m == n))


def build_sequence(spec, radius):
    """Materialize every zero of modulus <= ``radius`` described by ``spec``."""
    if isinstance(spec, Mapping):
        spec = SequenceSpec.from_dict(spec)
    radius = float(radius)
    if not radius > 0 or not math.isfinite(radius):
        raise RadiusError("radius must be a positive finite number")
    vals, mults, dens, _ = _generate(spec, radius)
    if vals.size == 0:
        raise RadiusError(f"radius {radius:g} is below the smallest generator point")
    return from_points(vals, mults, radius=radius, density=dens, label=spec.kind)


# --------------------------------------------------------------------------
# Counting functions
# --------------------------------------------------------------------------

def _check_real(seq):
    if not seq.is_real:
        raise SlowdecError("operation requires a real-mode sequence (see project_real)")


def _check_within(seq, *points):
    for u in points:
        if abs(u) > seq.radius:
            raise RadiusError(f"argument {u:g} lies beyond the materialization radius {seq.radius:g}")


def nu(seq, t):
    """Signed one-dimensional counting function.

    For ``t > 0`` the number of zeros in ``(0, t]``; for ``t < 0`` minus the
    number of zeros in ``[t, 0)``.  Accepts scalars or arrays.
    """
    _check_real(seq)
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise SlowdecError("nu is defined for nonzero t")
    if t.size and np.max(np.abs(t)) > seq.radius:
        raise RadiusError(f"|t| beyond the materialization radius {seq.radius:g}")
    zero_le = seq.count_le(0.0)
    zero_lt = seq.count_lt(0.0)
    out = np.where(t > 0, seq.count_le(t) - zero_le, -(zero_lt - seq.count_lt(t)))
    return int(out) if out.ndim == 0 else out


def n_plus(seq, x, t):
    """Number of zeros in ``(x, x + t]``."""
    _check_real(seq)
    _check_within(seq, x, x + t)
    return int(seq.count_le(x + t) - seq.count_le(x))


def n_minus(seq, x, t):
    """Number of zeros in ``(x - t, x]``."""
    _check_real(seq)
    _check_within(seq, x, x - t)
    return int(seq.count_le(x) - seq.count_le(x - t))


@dataclass(frozen=True, eq=False)
class CountingSnapshot:
    """Right-continuous step function ``t -> n(center, t)``.

    ``radii`` are the distinct distances from ``center`` to the zeros,
    ``jumps`` the multiplicity mass at each distance.  ``valid_up_to`` is the
    largest ``t`` for which the count is complete.
    """

    center: complex
    radii: np.ndarray
    jumps: np.ndarray
    valid_up_to: float

    @property
    def breakpoints(self):
        return list(zip(self.radii.tolist(), self.jumps.tolist()))

    @cached_property
    def _cum(self):
        return np.concatenate(([0], np.cumsum(self.jumps)))

    def count(self, t):
        """``n(center, t)``: zeros in the closed disc of radius ``t``."""
        out = self._cum[np.searchsorted(self.radii, t, side="right")]
        return int(out) if np.ndim(out) == 0 else out

    def log_integral(self, a, b):
        """Exact ``int_a^b n(center, t) / t dt`` for ``0 < a <= b``."""
        if b <= a:
            return 0.0
        r = np.clip(self.radii, a, b)
        return float(np.sum(self.jumps * np.log(b / r)))


def counting_snapshot(seq, center):
    center = complex(center)
    d = np.abs(seq.values - center)
    order = np.argsort(d, kind="stable")
    d = d[order]
    m = seq.multiplicities[order]
    starts = np.flatnonzero(np.r_[True, d[1:] != d[:-1]]) if d.size else np.array([], dtype=int)
    radii = d[starts] if d.size else d
    jumps = np.add.reduceat(m, starts) if d.size else m
    return CountingSnapshot(center, radii, jumps, seq.radius - abs(center))


def density_estimate(seq, return_spread=False):
    """Density ``Delta`` with ``2 Delta = lim j / |lambda_j|``.

    Exact when the generator supplied it.  Otherwise the median of
    ``j / |lambda_j|`` over the last decade of materialized points
    ``[radius / 10, radius]``, halved; the spread is the largest deviation
    of the halved ratios from that median.
    """
    if seq.density is not None:
        return (float(seq.density), 0.0) if return_spread else float(seq.density)
    if math.isinf(seq.radius):
        raise SlowdecError("a finite zero set has no density to estimate")
    if seq.total_multiplicity < 100:
        raise SlowdecError("density estimation needs at least 100 points")
    idx = np.cumsum(seq.multiplicities)
    mod = seq.moduli
    sel = mod >= seq.radius / 10.0
    ratios = idx[sel] / mod[sel] / 2.0
    med = float(np.median(ratios))
    spread = float(np.max(np.abs(ratios - med)))
    return (med, spread) if return_spread else med


def project_real(seq):
    """Replace each zero by its real part, keeping multiplicities.

    The result is complete up to ``sqrt(R^2 - (m0 ln R)^2)``, the largest
    real radius whose preimages all have modulus <= R.
    """
    if seq.is_real:
        return seq
    alpha = seq.values.real
    if np.any(alpha == 0):
        bad = seq.values[alpha == 0][:3]
        raise SlowdecError(f"projection degenerate: zeros with vanishing real part, e.g. {bad.tolist()}")
    r = seq.radius
    # unmaterialized zeros beyond r obey |Im mu| <= m0 ln|mu|
    beta_max = max(float(np.max(np.abs(seq.values.imag))), seq.m0 * math.log(2.0 * r))
    r_proj = math.sqrt(max(r * r - beta_max * beta_max, 0.0))
    vals, mults = _merge_coincident(alpha, seq.multiplicities)
    keep = np.abs(vals) <= r_proj
    vals, mults = _order_by_modulus(vals[keep], mults[keep])
    return ZeroSequence(vals, mults, r_proj, seq.density, seq.even, 0.0, (seq.label + "|real").lstrip("|"))
