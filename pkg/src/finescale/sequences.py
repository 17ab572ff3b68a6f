"""Generator families for strictly increasing real-valued sequences.

A vector sequence is described by r component specs; each component is
materialized on the index range 0..N.  The structural hypotheses the
experiment layer relies on (growth floor, lacunarity, convexity) are
checkable predicates here, not assumptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .compensated import MAGNITUDE_CAP
from .errors import (
    InvalidSpec,
    MagnitudeGuard,
    NonPositiveValue,
    NotIncreasing,
    TooShort,
)


@dataclass(frozen=True)
class Lacunary:
    """a0 * lam^n with lam > 1; consecutive ratios are exactly lam."""

    a0: float
    lam: float


@dataclass(frozen=True)
class QuadraticReal:
    """p2*(n+shift)^2 + p1*(n+shift) + p0 with p2 > 0.

    `shift` relocates the index origin so the gap floor holds from
    index 0 (gap at n is p2*(2*(n+shift)+1) + p1).
    """

    p2: float
    p1: float = 0.0
    p0: float = 0.0
    shift: int = 0


@dataclass(frozen=True)
class Power:
    """n^theta, theta > 0; strictly convex for theta > 1."""

    theta: float


@dataclass(frozen=True)
class ConvexCumulative:
    """Prefix sums of an explicit positive increasing gap list, so
    convexity holds by construction."""

    gaps: tuple


@dataclass(frozen=True)
class Explicit:
    """A verbatim list of values."""

    values: tuple


ComponentSpec = Union[Lacunary, QuadraticReal, Power, ConvexCumulative, Explicit]

_KINDS = {
    Lacunary: "lacunary",
    QuadraticReal: "quadratic",
    Power: "power",
    ConvexCumulative: "convex_cumulative",
    Explicit: "explicit",
}


@dataclass(frozen=True)
class ComponentValues:
    """Materialized component: strictly increasing float64 values on
    0..N plus the witnesses the checks need."""

    values: np.ndarray
    min_gap: float
    magnitude_max: float


@dataclass(frozen=True)
class VectorSequenceSpec:
    """r component specs evaluated on the lattice box {0..N}^r."""

    r: int
    N: int
    components: tuple

    def __post_init__(self):
        if self.r < 1:
            raise InvalidSpec("r must be >= 1")
        if self.N < 1:
            raise InvalidSpec("N must be >= 1")
        if len(self.components) != self.r:
            raise InvalidSpec(
                f"expected {self.r} components, got {len(self.components)}"
            )


def validate_component(spec: ComponentSpec) -> None:
    if isinstance(spec, Lacunary):
        if not (spec.a0 > 0):
            raise InvalidSpec("lacunary: a0 must be positive")
        if not (spec.lam > 1):
            raise InvalidSpec("lacunary: lambda must exceed 1")
    elif isinstance(spec, QuadraticReal):
        if not (spec.p2 > 0):
            raise InvalidSpec("quadratic: p2 must be positive")
        if spec.shift < 0:
            raise InvalidSpec("quadratic: shift must be nonnegative")
    elif isinstance(spec, Power):
        if not (spec.theta > 0):
            raise InvalidSpec("power: theta must be positive")
    elif isinstance(spec, ConvexCumulative):
        if len(spec.gaps) == 0:
            raise InvalidSpec("convex_cumulative: gap list is empty")
    elif isinstance(spec, Explicit):
        if len(spec.values) == 0:
            raise InvalidSpec("explicit: value list is empty")
    else:
        raise InvalidSpec(f"unknown component spec {type(spec).__name__}")


def materialize(spec: ComponentSpec, N: int) -> ComponentValues:
    """Evaluate the generator at indices 0..N.

    Raises InvalidSpec, MagnitudeGuard (|value| > 2^45), or
    NotIncreasing if the materialized values fail strict monotonicity.
    """
    if N < 1:
        raise InvalidSpec("N must be >= 1")
    validate_component(spec)
    n = np.arange(N + 1, dtype=np.float64)
    if isinstance(spec, Lacunary):
        vals = spec.a0 * spec.lam**n
    elif isinstance(spec, QuadraticReal):
        m = n + spec.shift
        vals = spec.p2 * m * m + spec.p1 * m + spec.p0
    elif isinstance(spec, Power):
        vals = n**spec.theta
    elif isinstance(spec, ConvexCumulative):
        if len(spec.gaps) < N:
            raise InvalidSpec(
                f"convex_cumulative: need >= {N} gaps, have {len(spec.gaps)}"
            )
        vals = np.concatenate(
            [[0.0], np.cumsum(np.asarray(spec.gaps[:N], dtype=np.float64))]
        )
    else:  # Explicit
        if len(spec.values) < N + 1:
            raise InvalidSpec(
                f"explicit: need >= {N + 1} values, have {len(spec.values)}"
            )
        vals = np.asarray(spec.values[: N + 1], dtype=np.float64)

    magnitude = float(np.max(np.abs(vals)))
    if magnitude > MAGNITUDE_CAP:
        raise MagnitudeGuard(
            f"{_KINDS[type(spec)]}: |a(n)| reaches {magnitude:.3e} > 2^45 at N={N}"
        )
    gaps = np.diff(vals)
    if not np.all(gaps > 0):
        raise NotIncreasing(f"{_KINDS[type(spec)]}: values not strictly increasing")
    return ComponentValues(
        values=vals, min_gap=float(gaps.min()), magnitude_max=magnitude
    )


def materialize_all(spec: VectorSequenceSpec) -> list:
    return [materialize(c, spec.N) for c in spec.components]


def _vals(values) -> np.ndarray:
    if isinstance(values, ComponentValues):
        return values.values
    return np.asarray(values, dtype=np.float64)


def check_growth(values, c: float) -> bool:
    """True iff every consecutive difference is >= c.

    A relative slack of 1e-12 absorbs the rounding of materialized
    values whose exact gap equals c (geometric families in particular).
    """
    v = _vals(values)
    if v.size == 0:
        raise InvalidSpec("empty value list")
    if v.size == 1:
        return True
    floor = c - 1e-12 * abs(c)
    return bool(np.all(np.diff(v) >= floor))


def check_lacunary(values, lam: float) -> bool:
    """True iff every consecutive ratio is >= lam (> 1).

    A relative slack of 1e-12 absorbs the rounding of materialized
    geometric values whose exact ratio equals lam.
    """
    v = _vals(values)
    if not (lam > 1):
        raise InvalidSpec("lambda must exceed 1")
    if np.any(v <= 0):
        raise NonPositiveValue("ratio test needs strictly positive values")
    if v.size < 2:
        return True
    return bool(np.all(v[1:] / v[:-1] >= lam * (1.0 - 1e-12)))


def check_convex(values) -> bool:
    """True iff consecutive gaps strictly increase."""
    v = _vals(values)
    if v.size < 3:
        raise TooShort("convexity needs at least three values")
    gaps = np.diff(v)
    return bool(np.all(np.diff(gaps) > 0))


# -- JSON wire format ------------------------------------------------------
# {"r": int, "N": int, "components": [{"kind": "...", ...params}]}

def component_to_dict(spec: ComponentSpec) -> dict:
    if isinstance(spec, Lacunary):
        return {"kind": "lacunary", "a0": spec.a0, "lambda": spec.lam}
    if isinstance(spec, QuadraticReal):
        return {
            "kind": "quadratic",
            "p2": spec.p2,
            "p1": spec.p1,
            "p0": spec.p0,
            "shift": spec.shift,
        }
    if isinstance(spec, Power):
        return {"kind": "power", "theta": spec.theta}
    if isinstance(spec, ConvexCumulative):
        return {"kind": "convex_cumulative", "gaps": list(spec.gaps)}
    if isinstance(spec, Explicit):
        return {"kind": "explicit", "values": list(spec.values)}
    raise InvalidSpec(f"unknown component spec {type(spec).__name__}")


def component_from_dict(d: dict) -> ComponentSpec:
    try:
        kind = d["kind"]
        if kind == "lacunary":
            spec = Lacunary(a0=float(d["a0"]), lam=float(d["lambda"]))
        elif kind == "quadratic":
            spec = QuadraticReal(
                p2=float(d["p2"]),
                p1=float(d.get("p1", 0.0)),
                p0=float(d.get("p0", 0.0)),
                shift=int(d.get("shift", 0)),
            )
        elif kind == "power":
            spec = Power(theta=float(d["theta"]))
        elif kind == "convex_cumulative":
            spec = ConvexCumulative(gaps=tuple(float(g) for g in d["gaps"]))
        elif kind == "explicit":
            spec = Explicit(values=tuple(float(v) for v in d["values"]))
        else:
            raise InvalidSpec(f"unknown component kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed component entry: {exc}") from exc
    validate_component(spec)
    return spec


def spec_to_dict(spec: VectorSequenceSpec) -> dict:
    return {
        "r": spec.r,
        "N": spec.N,
        "components": [component_to_dict(c) for c in spec.components],
    }


def spec_from_dict(d: dict) -> VectorSequenceSpec:
    try:
        r = int(d["r"])
        N = int(d["N"])
        comps = tuple(component_from_dict(c) for c in d["components"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed sequence spec: {exc}") from exc
    return VectorSequenceSpec(r=r, N=N, components=comps)


def load_spec(path: str) -> VectorSequenceSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def save_spec(spec: VectorSequenceSpec, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
