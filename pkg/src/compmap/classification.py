"""Local dynamics at a fixed point along an off-diagonal eigenvector.

The hyperbolic verdict needs only the eigenvalue; the nonhyperbolic one
(eigenvalue 1) is decided by the parity and southeast-sign of the first
nonzero Taylor coefficient pair of t -> T(fp + t v) beyond the linear term.
Case ids:

    hyperbolic_expanding    orbits leave the order interval from int(Q2 u Q4)
    hyperbolic_contracting  T^n(x) -> fp on the whole order interval
    odd_se_negative         escape from int(Q2 u Q4)
    odd_se_positive         T^n(x) -> fp on the whole order interval
    even_se_negative        T^n(x) -> fp on the Q4 side, escape from int Q2
    even_se_positive        T^n(x) -> fp on the Q2 side, escape from int Q4
    unclassified            none of the decidable coefficient patterns holds
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HypothesisError, SingularityError
from .geometry import Point2, Rect, order_interval
from .planarmap import PlanarMap

COEFF_TOL = 1e-8
UNIT_EIG_TOL = 1e-7
ILL_CONDITION_REL = 1e-4

CASE_CONCLUSIONS = {
    "hyperbolic_expanding": "orbits starting in int(Q2 u Q4) inside the order "
                            "interval eventually leave it",
    "hyperbolic_contracting": "orbits converge to the fixed point on the whole "
                              "order interval",
    "odd_se_negative": "orbits starting in int(Q2 u Q4) inside the order "
                       "interval eventually leave it",
    "odd_se_positive": "orbits converge to the fixed point on the whole order "
                       "interval",
    "even_se_negative": "orbits converge to the fixed point on the Q4 side and "
                        "leave the order interval from int Q2",
    "even_se_positive": "orbits converge to the fixed point on the Q2 side and "
                        "leave the order interval from int Q4",
    "unclassified": "no verdict",
}


def is_subsolution(m: PlanarMap, p: Point2) -> bool:
    """T(p) <=_se p, exact comparison on computed values."""
    fx, fy = m.step(p[0], p[1])
    return fx <= p[0] and fy >= p[1]


def is_supersolution(m: PlanarMap, p: Point2) -> bool:
    """p <=_se T(p), exact comparison on computed values."""
    fx, fy = m.step(p[0], p[1])
    return p[0] <= fx and p[1] >= fy


@dataclass(frozen=True)
class TaylorRay:
    """Coefficient pairs (c_j, d_j), j = 2..degree, of T(fp + t v) - fp - t v.

    direction is unit-normalized; mu_estimate is 1 + the measured linear term
    along the ray (the eigenvalue if v is an eigenvector). ill_conditioned is
    set when the two Richardson levels disagree beyond tolerance.
    """

    center: Point2
    direction: Point2
    coeffs: tuple
    degree: int
    mu_estimate: float
    ill_conditioned: bool = False


def _fit_parity(vals: dict, powers: tuple) -> tuple:
    """Solve sum_k a_k t^p_k = vals[t] for the three sampled step sizes.

    The system is solved in the scaled variable s = t/h so the Vandermonde
    stays well conditioned; coefficients are unscaled afterwards.
    """
    ts = sorted(vals.keys(), reverse=True)
    h = ts[0]
    A = np.array([[(t / h) ** p for p in powers] for t in ts])
    b = np.array([vals[t] for t in ts])
    scaled = np.linalg.solve(A, b)
    return tuple(scaled[k] / h ** p for k, p in enumerate(powers))


def taylor_along_eigenvector(m: PlanarMap, fp: Point2, v: Point2,
                             degree: int = 4, h: float = 0.1) -> TaylorRay:
    """Extract ray coefficients by Richardson-extrapolated central differences.

    phi(t) = T(fp + t v) - fp - t v is sampled at t = +-h/2^k, k = 0..3; even
    and odd parts are fitted separately so the (near-zero) linear term never
    pollutes the quadratic one, and the estimator is repeated at base step h/2
    to flag ill-conditioning. h is the largest ray offset; much below 0.05 the
    degree-4 coefficient drowns in rounding noise (error ~ eps/h^4). Requires
    |T(fp) - fp| < 1e-10; warns when the measured eigenvalue along v is not
    within 1e-7 of 1.
    """
    if not 2 <= degree <= 4:
        raise ValueError("degree must be between 2 and 4")
    if h <= 0:
        raise ValueError("step h must be positive")
    fx, fy = m.step(fp[0], fp[1])
    if max(abs(fx - fp[0]), abs(fy - fp[1])) > 1e-10:
        raise ValueError(f"({fp[0]:.6g}, {fp[1]:.6g}) is not a fixed point to "
                         "residual 1e-10")
    v = Point2(*v).unit()
    x0, y0 = fp

    def phi(t: float):
        px, py = m.step(x0 + t * v.x, y0 + t * v.y)
        return (px - x0 - t * v.x, py - y0 - t * v.y)

    steps = (h, h / 2.0, h / 4.0, h / 8.0)
    even = {0: {}, 1: {}}
    odd = {0: {}, 1: {}}
    for t in steps:
        plus = phi(t)
        minus = phi(-t)
        for c in (0, 1):
            even[c][t] = 0.5 * (plus[c] + minus[c])
            odd[c][t] = 0.5 * (plus[c] - minus[c])

    def fits(base):  # extrapolated estimator with base step `base`
        sel = [t for t in steps if t <= base][:3]
        out = {}
        for c in (0, 1):
            ev = {t: even[c][t] for t in sel}
            od = {t: odd[c][t] for t in sel}
            out[c] = (_fit_parity(ev, (2, 4, 6)), _fit_parity(od, (1, 3, 5)))
        return out

    primary = fits(h)
    halved = fits(h / 2.0)

    coeffs_by_power = {}
    lin = [0.0, 0.0]
    disagreement_sq = 0.0
    norm_sq = 0.0
    for c in (0, 1):
        (a2, a4, _a6), (a1, a3, _a5) = primary[c]
        (b2, b4, _), (_b1, b3, _) = halved[c]
        lin[c] = a1
        for j, val, check in ((2, a2, b2), (3, a3, b3), (4, a4, b4)):
            coeffs_by_power.setdefault(j, [0.0, 0.0])[c] = val
            if j <= degree:
                disagreement_sq += (val - check) ** 2
                norm_sq += val * val
    ill = math.sqrt(disagreement_sq) > ILL_CONDITION_REL * max(1.0, math.sqrt(norm_sq))

    mu_est = 1.0 + lin[0] * v.x + lin[1] * v.y
    if abs(mu_est - 1.0) > UNIT_EIG_TOL:
        warnings.warn(
            f"eigenvalue along the ray is {mu_est:.9g}, not within "
            f"{UNIT_EIG_TOL:g} of 1; nonhyperbolic classification does not apply",
            stacklevel=2)
    coeffs = tuple((coeffs_by_power[j][0], coeffs_by_power[j][1])
                   for j in range(2, degree + 1))
    return TaylorRay(center=Point2(*fp), direction=v, coeffs=coeffs,
                     degree=degree, mu_estimate=mu_est, ill_conditioned=ill)


def first_nonzero_index(ray: TaylorRay, tol: float = COEFF_TOL) -> Optional[int]:
    """Smallest j with max(|c_j|, |d_j|) > tol, or None when all are below tol."""
    for j, (c, d) in zip(range(2, ray.degree + 1), ray.coeffs):
        if max(abs(c), abs(d)) > tol:
            return j
    return None


@dataclass(frozen=True)
class LocalVerdict:
    ell: Optional[int]
    case_id: str
    detail: str

    @property
    def conclusion(self) -> str:
        return CASE_CONCLUSIONS[self.case_id]


def classify_hyperbolic_ray(mu: float, v: Point2) -> LocalVerdict:
    """Hyperbolic local dynamics along an eigenvector with v1*v2 < 0."""
    if not (v[0] * v[1] < 0):
        raise HypothesisError("eigenvector components must have opposite signs")
    if abs(mu - 1.0) <= UNIT_EIG_TOL:
        raise HypothesisError(
            "eigenvalue within 1e-7 of 1: use the nonhyperbolic Taylor path")
    if mu > 1.0:
        return LocalVerdict(None, "hyperbolic_expanding", f"mu = {mu:.9g} > 1")
    return LocalVerdict(None, "hyperbolic_contracting", f"mu = {mu:.9g} < 1")


def classify_nonhyperbolic(ray: TaylorRay, tol: float = COEFF_TOL) -> LocalVerdict:
    """Parity-and-sign verdict from the first nonzero coefficient pair.

    Decidable patterns: (a) c_l * d_l < 0, (b) c_l nonzero with the second
    component affine along the ray, (c) d_l nonzero with the first component
    affine. Affineness is certified by all coefficients of that component
    staying below tol. Anything else is 'unclassified'.
    """
    ell = first_nonzero_index(ray, tol)
    if ell is None:
        return LocalVerdict(None, "unclassified",
                            f"all coefficients below tol={tol:g}")
    c, d = ray.coeffs[ell - 2]
    comp1_affine = all(abs(cj) <= tol for cj, _ in ray.coeffs)
    comp2_affine = all(abs(dj) <= tol for _, dj in ray.coeffs)
    if c * d < 0 and abs(c) > tol and abs(d) > tol:
        detail = "a"
    elif abs(c) > tol and comp2_affine:
        detail = "b"
    elif abs(d) > tol and comp1_affine:
        detail = "c"
    else:
        return LocalVerdict(ell, "unclassified",
                            "conditions (a)/(b)/(c) all fail")
    cs = 0.0 if abs(c) <= tol else c
    ds = 0.0 if abs(d) <= tol else d
    se_negative = cs <= 0.0 and ds >= 0.0  # (c_l, d_l) <=_se (0, 0)
    parity = "odd" if ell % 2 else "even"
    side = "negative" if se_negative else "positive"
    return LocalVerdict(ell, f"{parity}_se_{side}", detail)


# ---------------------------------------------------------------------------
# Concrete order intervals and orbit checks


@dataclass(frozen=True)
class OrderInterval:
    """[[q2_corner, q4_corner]] around a fixed point, corners on the ray fp + t v."""

    q2_corner: Point2
    q4_corner: Point2

    def as_rect(self) -> Rect:
        return order_interval(self.q2_corner, self.q4_corner)

    def contains(self, p: Point2) -> bool:
        return self.as_rect().contains(Point2(*p))


# required (Q2-side, Q4-side) end behavior per case
_END_KIND = {
    "hyperbolic_expanding": ("sub", "super"),
    "hyperbolic_contracting": ("super", "sub"),
    "odd_se_negative": ("sub", "super"),
    "odd_se_positive": ("super", "sub"),
    "even_se_negative": ("sub", "sub"),
    "even_se_positive": ("super", "super"),
}


def find_order_interval(m: PlanarMap, fp: Point2, v: Point2, case_id: str,
                        scan: tuple = (1e-1, 1e-2, 1e-3)) -> OrderInterval:
    """Realize the order interval of a local verdict by scanning ray offsets.

    The corners fp + t v must satisfy the sub/supersolution inequality the
    verdict requires at each end; the largest workable |t| from scan is kept.
    """
    if case_id not in _END_KIND:
        raise ValueError(f"no order interval for case {case_id!r}")
    v = Point2(*v).unit()
    if not (v.x * v.y < 0):
        raise HypothesisError("ray direction must have opposite-signed components")
    if v.x > 0:  # orient so +t moves into Q2
        v = Point2(-v.x, -v.y)
    want_q2, want_q4 = _END_KIND[case_id]
    corners = []
    for want, sign in ((want_q2, +1.0), (want_q4, -1.0)):
        found = None
        for t in scan:
            p = Point2(fp[0] + sign * t * v.x, fp[1] + sign * t * v.y)
            if not m.domain.contains(p):
                continue
            try:
                ok = is_subsolution(m, p) if want == "sub" else is_supersolution(m, p)
            except SingularityError:
                continue
            if ok:
                found = p
                break
        if found is None:
            raise HypothesisError(
                f"no {want}solution found on the ray at offsets {scan}")
        corners.append(found)
    return OrderInterval(q2_corner=corners[0], q4_corner=corners[1])


def converges_to(m: PlanarMap, p: Point2, target: Point2,
                 tol: float = 1e-5, max_iter: int = 100_000) -> bool:
    """True when the orbit of p comes within sup-distance tol of target."""
    x, y = p
    tx, ty = target
    for _ in range(max_iter):
        if max(abs(x - tx), abs(y - ty)) <= tol:
            return True
        try:
            x, y = m.step(x, y)
        except SingularityError:
            return False
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
    return max(abs(x - tx), abs(y - ty)) <= tol


def exits_interval(m: PlanarMap, p: Point2, interval: OrderInterval,
                   max_iter: int = 100_000) -> bool:
    """True when the orbit of p leaves the order interval within max_iter."""
    rect = interval.as_rect()
    x, y = p
    for _ in range(max_iter):
        if not (rect.x_lo <= x <= rect.x_hi and rect.y_lo <= y <= rect.y_hi):
            return True
        try:
            x, y = m.step(x, y)
        except SingularityError:
            return False
        if not (math.isfinite(x) and math.isfinite(y)):
            return True  # blown up, certainly outside
    return False
