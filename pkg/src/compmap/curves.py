"""Tracing the invariant separatrix and unstable curves of competitive maps.

The separatrix through a fixed point is computed as the decision boundary of
classify_side: along each vertical column of the window the minus/plus
labels are bisected down to curve_tol. This realizes the global boundary
characterization directly instead of continuing the curve locally, which
would accumulate drift along the slow direction.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

from .errors import HypothesisError, NoConvergenceError, SingularityError
from .fixedpoints import (FixedPointRecord, NEWTON_TOL, _damped_newton,
                          check_invariant_curve_hypotheses, find_fixed_point,
                          find_period_two)
from .geometry import Point2, Rect, in_quadrant_interior
from .planarmap import PlanarMap, jacobian


# ---------------------------------------------------------------------------
# Side classification


@dataclass(frozen=True)
class SideOptions:
    """Options for classify_side.

    mode 'quadrant_escape' watches for entry into int Q2 / int Q4 relative to
    the fixed point with both inequalities cleared by epsilon_margin; it is
    the right tool for isolated equilibria. mode 'limit_equilibrium' iterates
    to convergence and compares the limit against the fixed point in the
    southeast order; use it when the map has a continuum of equilibria, where
    quadrant entry never happens.
    """

    mode: str = "quadrant_escape"
    epsilon_margin: float = 1e-9
    max_iter: int = 10_000
    conv_tol: float = 1e-12
    escape_bound: float = 1e6


@dataclass(frozen=True)
class SideVerdict:
    label: str  # 'minus' | 'plus' | 'band' | 'undecided'
    iterations_used: int
    flag: str = ""  # 'singularity' | 'divergence' | 'escape' | 'max_iter' | ...


def classify_side(m: PlanarMap, p: Point2, fp: Point2,
                  opts: SideOptions = SideOptions()) -> SideVerdict:
    """Decide which side of the separatrix through fp the point p lies on.

    minus is the northwest component (orbit enters int Q2(fp), or its limit
    equilibrium is strictly southeast-less than fp); plus the southeast one.
    """
    if opts.mode == "quadrant_escape":
        return _classify_quadrant(m, p, fp, opts)
    if opts.mode == "limit_equilibrium":
        return _classify_limit(m, p, fp, opts)
    raise ValueError(f"unknown classify_side mode {opts.mode!r}")


def _classify_quadrant(m: PlanarMap, p: Point2, fp: Point2,
                       opts: SideOptions) -> SideVerdict:
    eps = opts.epsilon_margin
    bound = opts.escape_bound
    fx, fy = fp
    dom = m.domain
    step = m.step
    x, y = float(p[0]), float(p[1])
    for n in range(opts.max_iter + 1):
        dx = x - fx
        dy = y - fy
        if abs(dx) <= eps and abs(dy) <= eps:
            return SideVerdict("band", n)
        if dx <= -eps and dy >= eps:
            return SideVerdict("minus", n)
        if dx >= eps and dy <= -eps:
            return SideVerdict("plus", n)
        if abs(x) > bound or abs(y) > bound:
            return SideVerdict("undecided", n, "divergence")
        try:
            x, y = step(x, y)
        except SingularityError:
            return SideVerdict("undecided", n, "singularity")
        if not (math.isfinite(x) and math.isfinite(y)):
            return SideVerdict("undecided", n, "singularity")
        if not (dom.x_lo <= x <= dom.x_hi and dom.y_lo <= y <= dom.y_hi):
            return SideVerdict("undecided", n, "escape")
    return SideVerdict("undecided", opts.max_iter, "max_iter")


def _classify_limit(m: PlanarMap, p: Point2, fp: Point2,
                    opts: SideOptions) -> SideVerdict:
    eps = opts.epsilon_margin
    bound = opts.escape_bound
    tol = opts.conv_tol
    step = m.step
    x, y = float(p[0]), float(p[1])
    for n in range(1, opts.max_iter + 1):
        try:
            xn, yn = step(x, y)
        except SingularityError:
            return SideVerdict("undecided", n, "singularity")
        if not (math.isfinite(xn) and math.isfinite(yn)):
            return SideVerdict("undecided", n, "singularity")
        if abs(xn) > bound or abs(yn) > bound:
            return SideVerdict("undecided", n, "divergence")
        if max(abs(xn - x), abs(yn - y)) < tol:
            x, y = xn, yn
            break
        x, y = xn, yn
    else:
        return SideVerdict("undecided", opts.max_iter, "max_iter")
    dx = x - fp[0]
    dy = y - fp[1]
    mag = max(abs(dx), abs(dy))
    if mag <= eps:
        return SideVerdict("band", n)
    slack = max(1e-12, 10.0 * tol)
    in_q2 = dx <= slack and dy >= -slack
    in_q4 = dx >= -slack and dy <= slack
    if in_q2 and not in_q4:
        return SideVerdict("minus", n)
    if in_q4 and not in_q2:
        return SideVerdict("plus", n)
    return SideVerdict("undecided", n, "incomparable_limit")


# ---------------------------------------------------------------------------
# Monotone curves


@dataclass(frozen=True)
class EndpointLabel:
    kind: str  # 'domain_boundary' | 'fixed_point' | 'period_two_pair' | 'truncated'
    at: Point2
    partner: Optional[Point2] = None

    def __str__(self):
        if self.kind == "period_two_pair":
            return (f"period_two_pair(({self.at.x:.9g}, {self.at.y:.9g}) <-> "
                    f"({self.partner.x:.9g}, {self.partner.y:.9g}))")
        return f"{self.kind}(({self.at.x:.9g}, {self.at.y:.9g}))"


@dataclass(frozen=True)
class MonotoneCurve:
    vertices: tuple
    monotonicity: str  # 'increasing' | 'decreasing'
    endpoint_left: EndpointLabel
    endpoint_right: EndpointLabel
    notes: tuple = ()

    def y_at(self, x: float) -> float:
        """Piecewise-linear interpolation; x must lie within the vertex range."""
        vs = self.vertices
        if not vs or x < vs[0].x or x > vs[-1].x:
            raise ValueError(f"x={x!r} outside the traced range")
        lo, hi = 0, len(vs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if vs[mid].x <= x:
                lo = mid
            else:
                hi = mid
        a, b = vs[lo], vs[hi]
        if b.x == a.x:
            return a.y
        t = (x - a.x) / (b.x - a.x)
        return a.y + t * (b.y - a.y)

    def vertical_distance(self, p: Point2) -> float:
        """|p.y - curve(p.x)|, inf when p.x is outside the traced range."""
        try:
            return abs(p[1] - self.y_at(p[0]))
        except ValueError:
            return math.inf


def validate_curve(curve: MonotoneCurve) -> None:
    """Assert the strict vertex monotonicity the curve kind promises."""
    vs = curve.vertices
    for a, b in zip(vs, vs[1:]):
        if curve.monotonicity == "increasing":
            if not (b.x > a.x and b.y > a.y):
                raise ValueError(f"increasing curve violated between {a} and {b}")
        else:
            if not (b.x > a.x and b.y < a.y):
                raise ValueError(f"decreasing curve violated between {a} and {b}")


# ---------------------------------------------------------------------------
# Endpoint analysis

ENDPOINT_BOUNDARY_TOL = 1e-6
ENDPOINT_RESIDUAL_TOL = 1e-6


def endpoint_analysis(m: PlanarMap, curve: MonotoneCurve, region: Rect):
    """Label both curve endpoints: boundary, fixed point, period-two, or truncated."""
    if not curve.vertices:
        raise ValueError("cannot analyze an empty curve")
    return (_endpoint_label(m, curve.vertices[0], region),
            _endpoint_label(m, curve.vertices[-1], region))


def _endpoint_label(m: PlanarMap, e: Point2, region: Rect) -> EndpointLabel:
    if region.boundary_dist(e) < ENDPOINT_BOUNDARY_TOL:
        return EndpointLabel("domain_boundary", e)
    try:
        fx, fy = m.step(e.x, e.y)
        r1 = max(abs(fx - e.x), abs(fy - e.y))
        if r1 < ENDPOINT_RESIDUAL_TOL:
            return EndpointLabel("fixed_point", e)
        gx, gy = m.step(fx, fy)
        r2 = max(abs(gx - e.x), abs(gy - e.y))
        if r2 < ENDPOINT_RESIDUAL_TOL:
            return EndpointLabel("period_two_pair", e, Point2(fx, fy))
    except SingularityError:
        pass
    return EndpointLabel("truncated", e)


# ---------------------------------------------------------------------------
# Stable curve tracing


@dataclass(frozen=True)
class CurveOptions:
    """Options for trace_stable_curve.

    columns are spread over the window with geometric refinement toward the
    fixed point. Bisection stops when the bracket is narrower than curve_tol.
    epsilon_margin (default 1e-4 * window diagonal) is the verdict margin for
    reporting; bisection itself runs at bisect_margin (default
    max(1e-12, curve_tol/100)) since the no-verdict band at the reporting
    margin is far wider than curve_tol.
    """

    columns: int = 256
    curve_tol: float = 1e-8
    probes: int = 17
    mode: Optional[str] = None  # None: from map meta ('continuum' -> limit mode)
    epsilon_margin: Optional[float] = None
    bisect_margin: Optional[float] = None
    max_iter: int = 50_000
    conv_tol: float = 1e-12
    escape_bound: float = 1e6


def _resolve_mode(m: PlanarMap, opts: CurveOptions) -> str:
    if opts.mode is not None:
        return opts.mode
    return "limit_equilibrium" if m.meta.get("continuum") else "quadrant_escape"


def _geometric_offsets(span: float, n: int, theta_min: float = 1e-3) -> list:
    if n <= 0:
        return []
    if n == 1:
        return [span]
    return [span * theta_min ** (1.0 - i / (n - 1)) for i in range(n)]


def _column_positions(window: Rect, fpx: float, columns: int) -> list:
    x0 = min(max(fpx, window.x_lo), window.x_hi)
    xs = set()
    if window.x_lo <= fpx <= window.x_hi:
        xs.add(fpx)
    spans = (x0 - window.x_lo, window.x_hi - x0)
    total = spans[0] + spans[1]
    if total <= 0:
        raise ValueError("degenerate window")
    for side, span in enumerate(spans):
        if span <= 0:
            continue
        n_side = max(2, round(columns * span / total))
        sign = -1.0 if side == 0 else 1.0
        n_uni = n_side // 2
        n_geo = n_side - n_uni
        for i in range(n_uni):
            xs.add(x0 + sign * span * (i + 0.5) / n_uni)
        for off in _geometric_offsets(span, n_geo):
            xs.add(x0 + sign * off)
    return sorted(xs)


def _solve_column(m: PlanarMap, fp: Point2, slope: float, cx: float,
                  window: Rect, curve_tol: float, probes: int,
                  sopts: SideOptions):
    """Locate the curve ordinate in one column; returns (y, flag) or (None, flag)."""
    y_lo, y_hi = window.y_lo, window.y_hi
    ys = [y_lo + (i + 0.5) * (y_hi - y_lo) / probes for i in range(probes)]
    dx = cx - fp[0]
    if abs(dx) <= 0.05 * window.width():
        # near the fixed point, add tangent-predicted probes to tighten the bracket
        yp = fp[1] + slope * dx
        delta = max(4.0 * abs(slope * dx), 16.0 * curve_tol)
        for cand in (yp - delta, yp + delta):
            if y_lo < cand < y_hi:
                ys.append(cand)
        ys.sort()
    lo = None
    hi = None
    saw_minus = False
    saw_plus = False
    for y in ys:
        v = classify_side(m, Point2(cx, y), fp, sopts)
        if v.label == "band":
            return y, ""
        if v.label == "plus":
            saw_plus = True
            lo = y
        elif v.label == "minus":
            saw_minus = True
            hi = y
            if lo is not None:
                break
    if lo is None or hi is None or hi <= lo:
        if saw_minus and not saw_plus:
            return None, "no_bracket:all_minus"  # curve below the window
        if saw_plus and not saw_minus:
            return None, "no_bracket:all_plus"  # curve above the window
        return None, "no_bracket:mixed"
    flag = ""
    for _ in range(200):
        if hi - lo <= curve_tol:
            break
        mid = 0.5 * (lo + hi)
        v = classify_side(m, Point2(cx, mid), fp, sopts)
        if v.label == "minus":
            hi = mid
        elif v.label == "plus":
            lo = mid
        elif v.label == "band":
            return mid, ""
        else:
            return 0.5 * (lo + hi), "undecided_probe"
    return 0.5 * (lo + hi), flag


def _column_task(payload):
    m, fp, slope, cx, window, curve_tol, probes, sopts = payload
    return _solve_column(m, fp, slope, cx, window, curve_tol, probes, sopts)


def locate_ordinate(m: PlanarMap, fp: FixedPointRecord, x: float, window: Rect,
                    opts: CurveOptions = None):
    """Bisect a single column for the curve ordinate at abscissa x.

    Returns the located y, or None when no minus/plus bracket exists in the
    column. Useful for spot-checking a traced curve at off-grid abscissae.
    """
    if opts is None:
        opts = CurveOptions()
    mode = _resolve_mode(m, opts)
    bisect_margin = opts.bisect_margin
    if bisect_margin is None:
        bisect_margin = max(1e-12, opts.curve_tol / 100.0)
    sopts = SideOptions(mode=mode, epsilon_margin=bisect_margin,
                        max_iter=opts.max_iter, conv_tol=opts.conv_tol,
                        escape_bound=opts.escape_bound)
    v = fp.eigen.v_lam
    slope = v.y / v.x if v is not None and v.x != 0 else 1.0
    y, _flag = _solve_column(m, fp.location, slope, x, window,
                             opts.curve_tol, opts.probes, sopts)
    return y


def trace_stable_curve(m: PlanarMap, fp: FixedPointRecord, window: Rect,
                       opts: CurveOptions = CurveOptions(),
                       workers: int = 1) -> MonotoneCurve:
    """Trace the increasing invariant curve through fp over a bounded window.

    Columns are bisected independently (parallelizable; the result does not
    depend on worker count). The column through fp.x is seeded from the fixed
    point itself and the local tangent direction.
    """
    if not window.is_bounded():
        raise ValueError("curve tracing needs a bounded window")
    hyp = check_invariant_curve_hypotheses(m, fp, window)
    if not hyp.all_pass:
        raise HypothesisError(
            "invariant-curve hypotheses failed: " + ", ".join(hyp.failed))
    mode = _resolve_mode(m, opts)
    bisect_margin = opts.bisect_margin
    if bisect_margin is None:
        bisect_margin = max(1e-12, opts.curve_tol / 100.0)
    sopts = SideOptions(mode=mode, epsilon_margin=bisect_margin,
                        max_iter=opts.max_iter, conv_tol=opts.conv_tol,
                        escape_bound=opts.escape_bound)
    v = fp.eigen.v_lam
    slope = v.y / v.x
    fpl = fp.location
    xs = _column_positions(window, fpl.x, opts.columns)

    tasks = []
    fp_col = None
    for cx in xs:
        if cx == fpl.x:
            fp_col = cx
            continue
        tasks.append((m, fpl, slope, cx, window, opts.curve_tol, opts.probes,
                      sopts))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_column_task, tasks,
                                    chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_column_task(t) for t in tasks]

    columns = []  # (x, y or None, flag)
    skipped = 0
    flagged = 0
    for (task, (y, flag)) in zip(tasks, results):
        cx = task[3]
        columns.append((cx, y, flag))
        if y is None:
            skipped += 1
        elif flag:
            flagged += 1
    if fp_col is not None and window.y_lo <= fpl.y <= window.y_hi:
        columns.append((fpl.x, fpl.y, ""))
    columns.sort(key=lambda c: c[0])

    kept = []
    dropped = 0
    for cx, y, _flag in columns:
        if y is None:
            continue
        p = Point2(cx, y)
        if kept and not (p.x > kept[-1].x and p.y > kept[-1].y):
            dropped += 1
            continue
        kept.append(p)
    if not kept:
        raise NoConvergenceError("no curve vertices could be located in the window")

    notes = []
    if skipped:
        notes.append(f"{skipped} columns skipped (no bracket)")
    if flagged:
        notes.append(f"{flagged} columns flagged (bisection probe undecided)")
    if dropped:
        notes.append(f"{dropped} vertices dropped by the monotonicity filter")
    curve = MonotoneCurve(vertices=tuple(kept), monotonicity="increasing",
                          endpoint_left=EndpointLabel("truncated", kept[0]),
                          endpoint_right=EndpointLabel("truncated", kept[-1]),
                          notes=tuple(notes))
    left, right = endpoint_analysis(m, curve, window)
    left = _exit_label(columns, kept[0], left, side="left")
    right = _exit_label(columns, kept[-1], right, side="right")
    curve = replace(curve, endpoint_left=left, endpoint_right=right)
    validate_curve(curve)
    return curve


def _exit_label(columns, end_vertex: Point2, fallback: EndpointLabel,
                side: str) -> EndpointLabel:
    """Label a traced end as domain_boundary when the curve leaves the window.

    The curve reaches the window frame when there are no columns beyond the
    end vertex (it runs into a vertical edge at column resolution) or when the
    adjacent column's probes were uniformly one-sided (it crossed the top or
    bottom edge between columns). A mixed adjacent column keeps the residual
    based label.
    """
    if fallback.kind != "truncated":
        return fallback
    if side == "right":
        beyond = [c for c in columns if c[0] > end_vertex.x]
        adjacent = beyond[0] if beyond else None
    else:
        beyond = [c for c in columns if c[0] < end_vertex.x]
        adjacent = beyond[-1] if beyond else None
    if adjacent is None:
        return EndpointLabel("domain_boundary", end_vertex)
    if adjacent[1] is None and adjacent[2] in ("no_bracket:all_minus",
                                               "no_bracket:all_plus"):
        return EndpointLabel("domain_boundary", end_vertex)
    return fallback


# ---------------------------------------------------------------------------
# Unstable curve tracing


def trace_unstable_curve(m: PlanarMap, fp: FixedPointRecord,
                         steps: int = 100, seed_radius: float = 1e-4,
                         seeds: int = 64) -> MonotoneCurve:
    """Grow the decreasing unstable curve by iterating seeds along E^mu.

    Requires mu > 1 with an off-axis, opposite-signed eigenvector. Seeds are
    placed on both sides of the fixed point; every forward image inside the
    domain is collected, sorted by x, and thinned to a strictly decreasing
    polyline. Orbits that leave the domain truncate their end of the curve.
    """
    e = fp.eigen
    if not e.real_distinct or e.v_mu is None:
        raise HypothesisError("unstable tracing needs real distinct eigenvalues")
    if not e.mu > 1.0:
        raise HypothesisError(f"mu = {e.mu:.9g} is not > 1")
    v = e.v_mu
    if not (v.x * v.y < 0) or min(abs(v.x), abs(v.y)) <= 1e-9:
        raise HypothesisError(
            "the unstable eigenvector must have nonzero components of opposite"
            " sign (not a coordinate axis)")
    fpl = fp.location
    pts = [fpl]
    truncated_right = False
    truncated_left = False
    for k in range(seeds):
        t = -seed_radius + 2.0 * seed_radius * k / (seeds - 1)
        x = fpl.x + t * v.x
        y = fpl.y + t * v.y
        # v.x > 0 by sign convention: t > 0 seeds grow the right (southeast) end
        right_side = t * v.x > 0
        if m.domain.contains(Point2(x, y)):
            pts.append(Point2(x, y))
        for _ in range(steps):
            try:
                x, y = m.step(x, y)
            except SingularityError:
                break
            if not (math.isfinite(x) and math.isfinite(y)
                    and m.domain.contains(Point2(x, y))):
                if right_side:
                    truncated_right = True
                else:
                    truncated_left = True
                break
            pts.append(Point2(x, y))

    pts.sort(key=lambda p: (p.x, -p.y))
    kept = []
    dropped = 0
    for p in pts:
        if kept:
            if p.x - kept[-1].x < 1e-6:
                continue
            if not p.y < kept[-1].y:
                dropped += 1
                continue
        kept.append(p)
    notes = (f"{dropped} vertices dropped by the monotonicity filter",) if dropped else ()
    curve = MonotoneCurve(vertices=tuple(kept), monotonicity="decreasing",
                          endpoint_left=EndpointLabel("truncated", kept[0]),
                          endpoint_right=EndpointLabel("truncated", kept[-1]),
                          notes=notes)
    left, right = endpoint_analysis(m, curve, m.domain)
    if truncated_left:
        left = EndpointLabel("truncated", kept[0])
    if truncated_right:
        right = EndpointLabel("truncated", kept[-1])
    curve = replace(curve, endpoint_left=left, endpoint_right=right)
    validate_curve(curve)
    return curve


# ---------------------------------------------------------------------------
# Boundary-endpoint sufficient conditions


@dataclass(frozen=True)
class BoundaryEndpointReport:
    """Sampled verdicts for the boundary-endpoint sufficient conditions.

    Each verdict means "no counterexample found among the Newton starts", not
    a proof. Witnesses carry any interior fixed points, minimal period-two
    points, or extra preimages of the fixed point found in the Q1/Q3 sector.
    """

    condition_i: bool
    condition_ii: bool
    condition_iii: bool
    det_at_fp: float
    starts: int
    fixed_witnesses: tuple
    period_two_witnesses: tuple
    preimage_witnesses: tuple

    @property
    def any_holds(self) -> bool:
        return self.condition_i or self.condition_ii or self.condition_iii


def _delta_parts(region: Rect, x0: float, y0: float):
    parts = []
    eps = 1e-9 * max(1.0, abs(x0), abs(y0))  # exclude numerical slivers
    cx = min(max(x0, region.x_lo), region.x_hi)
    cy = min(max(y0, region.y_lo), region.y_hi)
    q1 = Rect(cx, region.x_hi, cy, region.y_hi)
    if q1.x_hi > x0 + eps and q1.y_hi > y0 + eps:
        parts.append((q1, 1))
    q3 = Rect(region.x_lo, cx, region.y_lo, cy)
    if q3.x_lo < x0 - eps and q3.y_lo < y0 - eps:
        parts.append((q3, 3))
    return parts


def check_boundary_endpoint_conditions(m: PlanarMap, fp: FixedPointRecord, region: Rect,
                              grid: int = 8) -> BoundaryEndpointReport:
    """Search the Q1/Q3 sector for objects that would obstruct boundary endpoints."""
    if fp.kind != "fixed":
        raise ValueError("boundary-endpoint conditions apply to fixed points")
    x0, y0 = fp.location
    parts = _delta_parts(region, x0, y0)
    fp_pt = fp.location

    def in_delta(p: Point2) -> bool:
        if not region.contains(p):
            return False
        return any(in_quadrant_interior(fp_pt, p, k, 1e-9) for _, k in parts)

    starts = []
    for part, _k in parts:
        r = part if part.is_bounded() else part.clamped(
            Rect(x0 - 25.0, x0 + 25.0, y0 - 25.0, y0 + 25.0))
        for i in range(grid):
            for j in range(grid):
                starts.append(Point2(r.x_lo + (i + 0.5) * r.width() / grid,
                                     r.y_lo + (j + 0.5) * r.height() / grid))

    fixed_w = []
    p2_w = []
    pre_w = []

    def remember(bag, p):
        for q in bag:
            if p.dist_inf(q) < 1e-6:
                return
        bag.append(p)

    for s in starts:
        try:
            rec = find_fixed_point(m, s)
            r = rec.location
            if in_delta(r) and r.dist_inf(fp_pt) > 1e-6:
                remember(fixed_w, r)
        except (NoConvergenceError, SingularityError, OverflowError):
            pass
        try:
            rec = find_period_two(m, s)
            r = rec.location
            if in_delta(r):
                remember(p2_w, r)
        except (NoConvergenceError, SingularityError, OverflowError):
            pass
        try:
            def F(p, _t=fp_pt):
                fx, fy = m.step(p.x, p.y)
                return Point2(fx - _t.x, fy - _t.y)

            root = _damped_newton(F, lambda p: jacobian(m, p), s,
                                  NEWTON_TOL, 100)
            if in_delta(root) and root.dist_inf(fp_pt) > 1e-6:
                remember(pre_w, root)
        except (NoConvergenceError, SingularityError, OverflowError):
            pass

    det = jacobian(m, fp.location).det()
    no_fixed = not fixed_w
    no_p2 = not p2_w
    no_pre = not pre_w
    return BoundaryEndpointReport(
        condition_i=no_fixed and no_p2,
        condition_ii=no_fixed and det > 0 and no_pre,
        condition_iii=no_p2 and det < 0 and no_pre,
        det_at_fp=det,
        starts=len(starts),
        fixed_witnesses=tuple(fixed_w),
        period_two_witnesses=tuple(p2_w),
        preimage_witnesses=tuple(pre_w))
