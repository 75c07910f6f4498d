"""Recurrence and diffusion experiments.

Recurrence is measured through close returns of the odd/odd cylinders along a
Teichmuller ray; diffusion through the deck displacement of long exact
trajectories on the Z^2-cover.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .cylinders import maximal_cylinder
from .flow import Direction, OutcomeKind, SingularHit, embed, generic_start, start_state, trace
from .surface import FAVORITE_SQUARE, SquareId, adjacent_square, deck_coordinate
from .unfold import UnfoldedLine, walk

CYLINDER_SCALE_SQ = 72  # |v*|^2 = 72 (p^2 + q^2)


# --- directions and periodic data ------------------------------------------------

@dataclass(frozen=True)
class UnitDirection:
    """A unit vector together with the angle that produced it."""

    u1: float
    u2: float
    angle: float

    def __post_init__(self) -> None:
        if abs(self.u1 * self.u1 + self.u2 * self.u2 - 1.0) > 1e-12:
            raise ValueError("direction is not a unit vector")

    @classmethod
    def from_angle(cls, angle: float) -> "UnitDirection":
        return cls(math.cos(angle), math.sin(angle), angle)

    @classmethod
    def from_vector(cls, x: float, y: float) -> "UnitDirection":
        r = math.hypot(x, y)
        return cls(x / r, y / r, math.atan2(y, x))

    @classmethod
    def random(cls, seed: int) -> "UnitDirection":
        return cls.from_angle(random.Random(seed).uniform(0.0, 2.0 * math.pi))

    def vector(self) -> tuple[float, float]:
        return (self.u1, self.u2)


@dataclass(frozen=True)
class PeriodicDatum:
    """An odd/odd cylinder direction (q, p); its holonomy is v* = 6*sqrt(2)*(q, p)."""

    q: int
    p: int

    def __post_init__(self) -> None:
        if self.p % 2 == 0 or self.q % 2 == 0 or gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.q},{self.p}) is not an odd coprime pair")

    @property
    def vstar_scale_sq(self) -> int:
        return CYLINDER_SCALE_SQ * (self.p * self.p + self.q * self.q)

    def holonomy(self) -> tuple[float, float]:
        c = 6.0 * math.sqrt(2.0)
        return (c * self.q, c * self.p)


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1]


def _wedge(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def close_return_bound(u: UnitDirection, v: Sequence[float]) -> tuple[float, float, float]:
    """(return time |u.v|, distance bound |u^v|, bad-set measure bound |(u.v)(u^v)|)."""
    if v[0] == 0 and v[1] == 0:
        raise ValueError("holonomy vector must be nonzero")
    uv = u.vector()
    d, w = abs(_dot(uv, v)), abs(_wedge(uv, v))
    return d, w, d * w


def busemann_exp(u: UnitDirection, pd: PeriodicDatum, t: float) -> float:
    """e^t (u ^ v*)^2 + e^-t (u . v*)^2."""
    uv = u.vector()
    w2 = CYLINDER_SCALE_SQ * _wedge(uv, (pd.q, pd.p)) ** 2
    d2 = CYLINDER_SCALE_SQ * _dot(uv, (pd.q, pd.p)) ** 2
    return math.exp(t) * w2 + math.exp(-t) * d2


def busemann_min_closed_form(u: UnitDirection, pd: PeriodicDatum) -> tuple[float, float]:
    """(argmin t*, minimum value) of busemann_exp; requires u neither parallel nor orthogonal to v*."""
    uv = u.vector()
    d = math.sqrt(CYLINDER_SCALE_SQ) * abs(_dot(uv, (pd.q, pd.p)))
    w = math.sqrt(CYLINDER_SCALE_SQ) * abs(_wedge(uv, (pd.q, pd.p)))
    return math.log(d) - math.log(w), 2.0 * d * w


@dataclass(frozen=True)
class GridMinimum:
    argmin: float
    value: float
    spacing: float


def grid_minimize(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                  points: int = 2001, levels: int = 3) -> GridMinimum:
    """Minimize a vectorized convex function by repeatedly refining a uniform grid around the best node."""
    for _ in range(levels):
        ts = np.linspace(lo, hi, points)
        vals = f(ts)
        i = int(np.argmin(vals))
        spacing = (hi - lo) / (points - 1)
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, points - 1)]
    return GridMinimum(float(ts[i]), float(vals[i]), float(spacing))


def busemann_grid_minimum(u: UnitDirection, pd: PeriodicDatum, lo: float = -60.0, hi: float = 60.0) -> GridMinimum:
    uv = u.vector()
    w2 = CYLINDER_SCALE_SQ * _wedge(uv, (pd.q, pd.p)) ** 2
    d2 = CYLINDER_SCALE_SQ * _dot(uv, (pd.q, pd.p)) ** 2
    return grid_minimize(lambda t: np.exp(t) * w2 + np.exp(-t) * d2, lo, hi)


# --- cylinder sanity data ----------------------------------------------------------

def _neighbor_squares() -> list[SquareId]:
    out = [FAVORITE_SQUARE]
    for side in range(4):
        sq = adjacent_square(FAVORITE_SQUARE, side).square
        if sq not in out:
            out.append(sq)
    return out


def deck_stabilizer_order(squares: Iterable[SquareId]) -> int:
    """Number of deck translations mapping a finite set of squares onto itself."""
    cells = {(deck_coordinate(s)[0], s.face) for s in squares}
    anchor = next(iter(cells))
    count = 0
    for (mn, face) in cells:
        if face != anchor[1]:
            continue
        shift = (mn[0] - anchor[0][0], mn[1] - anchor[0][1])
        if {((c[0] + shift[0], c[1] + shift[1]), f) for c, f in cells} == cells:
            count += 1
    return count


def cylinder_ratios(d: Direction) -> tuple[Fraction, int]:
    """(maximal circumference ratio, maximal stabilizer order) over cylinders through nearby squares.

    Both are 1 for every odd/odd direction.
    """
    if not d.is_odd:
        raise ValueError("cylinder ratios are defined for odd/odd directions")
    circ, stab = [], []
    for sq in _neighbor_squares():
        seed = trace(start_state(d, generic_start(d), sq))
        cyl = maximal_cylinder(seed)
        circ.append(cyl.circumference_sq)
        stab.append(deck_stabilizer_order(v.state.square for v in cyl.visits))
    ratio_sq = max(circ) / min(circ)
    root = math.isqrt(ratio_sq.numerator), math.isqrt(ratio_sq.denominator)
    if Fraction(root[0], root[1]) ** 2 != ratio_sq:
        raise ArithmeticError("circumference ratio is irrational")
    return Fraction(root[0], root[1]), max(stab)


# --- recurrence scan ---------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceRecord:
    t: float
    value: float
    q: int
    p: int


@dataclass
class RecurrenceScan:
    direction: UnitDirection
    t_max: float
    denom_bound: int
    ts: np.ndarray
    values: np.ndarray  # log of (1/2) min busemann_exp on the grid
    records: list[RecurrenceRecord]
    method: str

    @property
    def lowest(self) -> float:
        return self.records[-1].value if self.records else math.inf

    def to_record(self) -> dict:
        return {
            "angle": self.direction.angle,
            "t_max": self.t_max,
            "denom_bound": self.denom_bound,
            "method": self.method,
            "lowest": self.lowest,
            "records": [asdict(r) for r in self.records],
        }


def odd_pairs_brute(bound: int) -> np.ndarray:
    """All odd coprime (q, p), |q|,|p| <= bound, one per +-pair (q > 0)."""
    qs = np.arange(1, bound + 1, 2)
    ps = np.arange(-bound if bound % 2 else -bound + 1, bound + 1, 2)
    qq, pp = np.meshgrid(qs, ps, indexing="ij")
    qq, pp = qq.ravel(), pp.ravel()
    keep = np.gcd(qq, pp) == 1
    return np.stack([qq[keep], pp[keep]], axis=1)


def _normalize_pair(q: int, p: int) -> tuple[int, int]:
    return (q, p) if q > 0 else (-q, -p)


def _stern_brocot_seeds(u: UnitDirection, bound: int) -> set[tuple[int, int]]:
    """Odd/odd nodes on the Stern-Brocot path toward the slope of u, plus the diagonals."""
    seeds = {(1, 1), (1, -1)}
    x, y = abs(u.u1), abs(u.u2)
    sx = 1 if u.u1 >= 0 else -1
    sy = 1 if u.u2 >= 0 else -1
    lo, hi = (1, 0), (0, 1)  # (q, p) bounds of slopes p/q from 0 up to infinity
    while True:
        mid = (lo[0] + hi[0], lo[1] + hi[1])
        if max(mid) > bound:
            break
        if mid[0] % 2 and mid[1] % 2:
            seeds.add(_normalize_pair(sx * mid[0], sy * mid[1]))
        # compare slope y/x with p/q
        if mid[1] * x < y * mid[0]:
            lo = mid
        elif mid[1] * x > y * mid[0]:
            hi = mid
        else:
            break
    return seeds


def _pairs_in_box(u: UnitDirection, alpha: float, beta: float, bound: int) -> Iterable[tuple[int, int]]:
    """Integer (q, p) with |u ^ (q,p)| <= alpha and |u . (q,p)| <= beta."""
    u1, u2 = u.u1, u.u2
    swap = abs(u1) < abs(u2)
    if swap:
        # work in the transposed frame so the division below is by the larger component
        u1, u2 = u2, u1
    qmax = min(bound, int(math.floor(beta * abs(u1) + alpha * abs(u2))) + 1)
    for q in range(-qmax, qmax + 1):
        centre = u2 * q / u1
        half = alpha / abs(u1)
        for p in range(max(-bound, math.ceil(centre - half)), min(bound, math.floor(centre + half)) + 1):
            a, b = (p, q) if swap else (q, p)
            yield a, b


def _pruned_candidates(u: UnitDirection, ts: np.ndarray, bound: int) -> np.ndarray:
    seeds = np.array(sorted(_stern_brocot_seeds(u, bound)), dtype=float)
    w2 = CYLINDER_SCALE_SQ * (u.u1 * seeds[:, 1] - u.u2 * seeds[:, 0]) ** 2
    d2 = CYLINDER_SCALE_SQ * (u.u1 * seeds[:, 0] + u.u2 * seeds[:, 1]) ** 2
    found = {tuple(int(c) for c in s) for s in seeds}
    margin = 1.0 + 1e-9
    for t in ts:
        best = float(np.min(np.exp(t) * w2 + np.exp(-t) * d2)) * margin
        # any better pair must have both terms below the current best
        alpha = math.sqrt(best * math.exp(-t) / CYLINDER_SCALE_SQ)
        beta = math.sqrt(best * math.exp(t) / CYLINDER_SCALE_SQ)
        for q, p in _pairs_in_box(u, alpha, beta, bound):
            if q % 2 and p % 2 and gcd(q, p) == 1:
                found.add(_normalize_pair(q, p))
    return np.array(sorted(found), dtype=np.int64)


def _scan_values(u: UnitDirection, pairs: np.ndarray, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = pairs[:, 0].astype(float)
    p = pairs[:, 1].astype(float)
    w2 = CYLINDER_SCALE_SQ * (u.u1 * p - u.u2 * q) ** 2
    d2 = CYLINDER_SCALE_SQ * (u.u1 * q + u.u2 * p) ** 2
    values = np.empty(len(ts))
    best = np.empty(len(ts), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, len(pairs)))
    for start in range(0, len(ts), chunk):
        tt = ts[start:start + chunk, None]
        grid = np.exp(tt) * w2[None, :] + np.exp(-tt) * d2[None, :]
        idx = np.argmin(grid, axis=1)
        best[start:start + chunk] = idx
        values[start:start + chunk] = grid[np.arange(len(idx)), idx]
    with np.errstate(divide="ignore"):
        return np.log(0.5 * values), best


def recurrence_scan(u: UnitDirection, t_max: float, denom_bound: int, t_step: float = 0.05,
                    method: str = "auto") -> RecurrenceScan:
    """Record minima of the log Busemann infimum along the ray, over odd/odd pairs up to ``denom_bound``.

    ``method`` is ``"brute"``, ``"pruned"`` or ``"auto"`` (brute force up to a bound of 100).
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if method == "auto":
        method = "brute" if denom_bound <= 100 else "pruned"
    ts = np.linspace(0.0, t_max, int(round(t_max / t_step)) + 1)
    if method == "brute":
        pairs = odd_pairs_brute(denom_bound)
    elif method == "pruned":
        pairs = _pruned_candidates(u, ts, denom_bound)
    else:
        raise ValueError(f"unknown method {method!r}")
    values, best = _scan_values(u, pairs, ts)
    records: list[RecurrenceRecord] = []
    low = math.inf
    for t, v, i in zip(ts, values, best):
        if v < low:
            low = float(v)
            records.append(RecurrenceRecord(float(t), low, int(pairs[i, 0]), int(pairs[i, 1])))
    return RecurrenceScan(u, t_max, denom_bound, ts, values, records, method)


# --- diffusion -----------------------------------------------------------------

def rational_direction(u: UnitDirection, height: int) -> Direction:
    """Primitive integer direction of components at most ``height`` approximating u by a convergent."""
    x, y = u.u1, u.u2
    if abs(x) >= abs(y):
        r = Fraction(y / x).limit_denominator(height)
        a, b = r.denominator, r.numerator
        if x < 0:
            a, b = -a, -b
    else:
        r = Fraction(x / y).limit_denominator(height)
        b, a = r.denominator, r.numerator
        if y < 0:
            a, b = -a, -b
    return Direction(a, b)


@dataclass(frozen=True)
class DiffusionSample:
    length: float  # trajectory length at the sampled crossing
    crossings: int
    displacement: tuple[int, int]
    distance_sq: Fraction
    extent_sq: int  # max squared displacement of square corners over all crossings so far

    @property
    def distance(self) -> float:
        return math.sqrt(self.distance_sq)

    @property
    def extent(self) -> float:
        return math.sqrt(self.extent_sq)

    def to_record(self) -> dict:
        return {
            "length": self.length,
            "crossings": self.crossings,
            "displacement": list(self.displacement),
            "distance_sq": str(self.distance_sq),
            "extent_sq": self.extent_sq,
        }


@dataclass
class DiffusionRun:
    direction: Direction
    samples: list[DiffusionSample]
    crossings: int
    singular: SingularHit | None = None


def _distance_sq(p, q) -> Fraction:
    return sum((Fraction(a) - Fraction(b)) ** 2 for a, b in zip(p, q))


def diffusion_run(direction: Direction, max_crossings: int = 10**6, point=None) -> DiffusionRun:
    """Sample deck displacement and distance at the first crossings past lengths 1, 2, 4, ...

    Stops after ``max_crossings`` edge crossings. A cone point hit ends the
    run early and is reported on the result.
    """
    point = generic_start(direction) if point is None else point
    start = start_state(direction, point)
    line = UnfoldedLine(start)
    # the longest possible stretch is max_crossings diagonals of a unit square
    top = 2 * max_crossings * max_crossings
    clocks = []
    k = 0
    while 4**k <= top:
        clocks.append(line.clock_for_length(4**k))
        k += 1
    origin = embed(start)
    base_deck = deck_coordinate(start.square)[0]
    try:
        records, count = walk(start, max_crossings, clocks)
    except SingularHit as hit:
        return DiffusionRun(direction, [], 0, hit)
    speed = math.sqrt(direction.norm_sq)
    samples = []
    for rec in records:
        mn = deck_coordinate(rec.state.square)[0]
        samples.append(DiffusionSample(
            float(rec.time) * speed,
            rec.crossing,
            (mn[0] - base_deck[0], mn[1] - base_deck[1]),
            _distance_sq(embed(rec.state), origin),
            rec.extent_sq,
        ))
    return DiffusionRun(direction, samples, count)


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    intercept: float
    residual: float  # root mean square of the log-log residuals
    used: int


def exponent_fit(times: Sequence[float], distances: Sequence[float]) -> ExponentFit:
    """Least-squares slope of log(running max distance) against log T over the upper half of the samples."""
    if len(times) < 8:
        raise ValueError("need at least 8 samples")
    t = np.asarray(times, dtype=float)
    d = np.maximum.accumulate(np.asarray(distances, dtype=float))
    half = len(t) // 2
    t, d = t[half:], d[half:]
    if np.any(d <= 0):
        raise ValueError("distances in the fitted range must be positive")
    x, y = np.log(t), np.log(d)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return ExponentFit(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))), len(t))


def fit_run(run: DiffusionRun) -> ExponentFit:
    """Fit the sup over all crossings (not only sampled ones) of the displacement, emulating the limsup."""
    return exponent_fit([s.length for s in run.samples], [max(s.extent, s.distance) for s in run.samples])


# --- ensembles and manifests --------------------------------------------------------

@dataclass(frozen=True)
class SeedResult:
    seed: int
    direction: tuple[int, int]
    exponent: float | None
    residual: float | None
    crossings: int
    status: str


def diffusion_seed(seed: int, height: int = 10**7, max_crossings: int = 10**6) -> tuple[SeedResult, DiffusionRun]:
    u = UnitDirection.random(seed)
    d = rational_direction(u, height)
    run = diffusion_run(d, max_crossings)
    if run.singular is not None:
        return SeedResult(seed, d.vector(), None, None, run.crossings, "singular"), run
    fit = fit_run(run)
    return SeedResult(seed, d.vector(), fit.exponent, fit.residual, run.crossings, "ok"), run


def _seed_worker(args) -> SeedResult:
    seed, height, max_crossings = args
    return diffusion_seed(seed, height, max_crossings)[0]


def diffusion_ensemble(seeds: Sequence[int], height: int = 10**7, max_crossings: int = 10**6,
                       workers: int | None = None) -> list[SeedResult]:
    """Fit every seed; results come back ordered by seed regardless of scheduling."""
    jobs = [(s, height, max_crossings) for s in sorted(seeds)]
    if workers == 1 or len(jobs) <= 1:
        return [_seed_worker(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_seed_worker, jobs))


def median_exponent(results: Sequence[SeedResult]) -> float:
    vals = [r.exponent for r in results if r.exponent is not None]
    return float(np.median(vals)) if vals else math.nan


def run_manifest(manifest: dict, out_dir: Path | str | None = None) -> dict:
    """Run a JSON experiment manifest; writes per-sample JSON Lines and returns the summary record.

    Recognised kinds: ``diffusion`` (keys seeds, height, max_crossings, workers)
    and ``recurrence`` (keys seeds, t_max, denom_bound, t_step).
    """
    kind = manifest.get("kind")
    seeds = [int(s) for s in manifest["seeds"]]
    lines: list[dict] = []
    if kind == "diffusion":
        height = int(manifest.get("height", 10**7))
        max_crossings = int(manifest.get("max_crossings", 10**6))
        results = diffusion_ensemble(seeds, height, max_crossings, manifest.get("workers"))
        lines = [asdict(r) for r in results]
        summary = {"kind": kind, "seeds": len(seeds), "median_exponent": median_exponent(results)}
    elif kind == "recurrence":
        t_max = float(manifest.get("t_max", 20.0))
        bound = int(manifest.get("denom_bound", 500))
        step = float(manifest.get("t_step", 0.05))
        lows = []
        for s in sorted(seeds):
            scan = recurrence_scan(UnitDirection.random(s), t_max, bound, step)
            lines.append({"seed": s, **scan.to_record()})
            lows.append(scan.lowest)
        summary = {"kind": kind, "seeds": len(seeds), "lowest": lows}
    else:
        raise ValueError(f"unknown manifest kind {kind!r}")
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"{kind}.jsonl", "w") as fh:
            for line in lines:
                fh.write(json.dumps(line, sort_keys=True) + "\n")
        with open(out / f"{kind}_summary.json", "w") as fh:
            json.dump(summary, fh, sort_keys=True, indent=2)
    return summary
