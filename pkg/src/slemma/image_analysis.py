"""Joint image sets U = {(f(x), g(x)) : x on the generalized sphere}.

For homogeneous f, g the image of R^n \\ {0} is the cone of rays through
U, so everything about it is encoded in the set of directions
atan2(g, f).  This module samples that direction set, measures the
sector angle, classifies the image (singleton, line through the origin,
angular sector, full plane), certifies the absence of common zeros, and
probes midpoint convexity.

Direction gaps are the load-bearing quantity.  A gap in the sampled set
can be real (the pair of rays is genuinely missing) or an artifact of
fast direction motion between neighboring samples.  Since the direction
set of a continuous image is path-connected between consecutive sphere
samples, bisecting the sphere parameter must close an artifact gap,
while a real gap survives down to the width floor.  For n = 2 the
sampler therefore adaptively refines every steep jump before trusting a
gap; without this, steep-but-continuous pairs are misread as sectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .homog_core import (
    DEFAULT_SEED,
    TWO_PI,
    Dilation,
    GeneralizedPolynomial,
    sphere_samples,
    theta_grid,
    theta_point_scalar,
    theta_points,
)

DEFAULT_COUNT_N2 = 4096
DEFAULT_COUNT_HIGHD = 65536

# Gaps are trusted only above 3x the expected sample spacing.
GAP_FACTOR = 3.0

REFINE_WIDTH_FLOOR = 1e-9
REFINE_BUDGET = 200000

BNB_MAX_CELLS = 20000
BNB_WIDTH_FLOOR = 1e-7


class ImageClass(Enum):
    SINGLETON = "singleton"
    LINE_THROUGH_ORIGIN = "line_through_origin"
    FULL_PLANE = "full_plane"
    ANGULAR_SECTOR = "angular_sector"


class DegenerateImageError(ValueError):
    """Raised when every sample maps to (0, 0) and no direction exists."""


@dataclass
class ImageSummary:
    classification: ImageClass
    phi: float
    largest_gap: float
    directions: np.ndarray
    sample_count: int
    seed: int
    degree: float
    gaps: list[tuple[float, float]] = field(default_factory=list)
    boundary_angles: list[float] = field(default_factory=list)
    refinement_evals: int = 0
    refinement_complete: bool = True
    scatter: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "phi": self.phi,
            "largest_gap": self.largest_gap,
            "direction_count": int(len(self.directions)),
            "sample_count": self.sample_count,
            "seed": self.seed,
            "degree": self.degree,
            "gaps": [[a, b] for a, b in self.gaps],
            "boundary_angles": list(self.boundary_angles),
            "refinement_evals": self.refinement_evals,
            "refinement_complete": self.refinement_complete,
        }


@dataclass
class ZeroMargin:
    margin: float
    refined: bool
    witness: np.ndarray
    threshold: float
    sample_count: int
    seed: int
    certified_bound: float | None = None

    def to_dict(self) -> dict:
        return {
            "margin": self.margin,
            "refined": self.refined,
            "witness": list(self.witness),
            "threshold": self.threshold,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "certified_bound": self.certified_bound,
        }


def _default_count(n: int) -> int:
    return DEFAULT_COUNT_N2 if n <= 2 else DEFAULT_COUNT_HIGHD


def _common_degree(f: GeneralizedPolynomial, g: GeneralizedPolynomial, d: Dilation) -> float:
    if f.n != g.n or f.n != d.n:
        raise ValueError("f, g, and the dilation must share one dimension")
    kf = f.homogeneity_degree(d)
    kg = g.homogeneity_degree(d)
    if kf is None or kg is None:
        raise ValueError("f and g must both be homogeneous for image analysis")
    if abs(kf - kg) > 1e-9 * max(1.0, abs(kf)):
        raise ValueError(f"degrees differ: {kf} vs {kg}")
    return kf


def _circ_diff(a: float, b: float) -> float:
    """Shortest angular distance between two directions, in [0, pi]."""
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _gap_list(dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Circular gaps of a sorted direction array: (gap widths, gap starts)."""
    gaps = np.diff(np.append(dirs, dirs[0] + TWO_PI))
    return gaps, dirs


def _refine_directions(f, g, d, theta, F, G, gap_tol):
    """Bisect steep direction jumps between consecutive theta samples.

    Returns extra direction samples, the evaluation count, and whether the
    work queue drained within budget.  Segments whose endpoints include an
    image zero are refined unconditionally: the zero severs the direction
    path, and the bisection pins down the limiting directions on each side.
    """
    scale = max(1.0, float(np.max(np.abs(F))), float(np.max(np.abs(G))))
    ztol = 1e-12 * scale
    m = len(theta)

    def needs_split(fa, ga, fb, gb):
        ra, rb = math.hypot(fa, ga), math.hypot(fb, gb)
        if ra <= ztol or rb <= ztol:
            return True
        return _circ_diff(math.atan2(ga, fa), math.atan2(gb, fb)) > gap_tol

    stack = []
    for i in range(m):
        j = (i + 1) % m
        tb = theta[j] + (TWO_PI if j == 0 else 0.0)
        if needs_split(F[i], G[i], F[j], G[j]):
            stack.append((theta[i], F[i], G[i], tb, F[j], G[j]))

    extras = []
    evals = 0
    while stack and evals < REFINE_BUDGET:
        ta, fa, ga, tb, fb, gb = stack.pop()
        tm = 0.5 * (ta + tb)
        x = theta_point_scalar(tm, d)
        fm, gm = f(x), g(x)
        evals += 1
        if math.hypot(fm, gm) > ztol:
            extras.append(math.atan2(gm, fm))
        if tb - ta <= 2.0 * REFINE_WIDTH_FLOOR:
            continue
        if needs_split(fa, ga, fm, gm):
            stack.append((ta, fa, ga, tm, fm, gm))
        if needs_split(fm, gm, fb, gb):
            stack.append((tm, fm, gm, tb, fb, gb))
    return np.array(extras), evals, not stack


def _wrap_angle(a: float) -> float:
    """Map to (-pi, pi]."""
    w = (a + math.pi) % TWO_PI - math.pi
    return math.pi if w == -math.pi else w


def sample_image(
    f: GeneralizedPolynomial,
    g: GeneralizedPolynomial,
    d: Dilation,
    count: int | None = None,
    seed: int = DEFAULT_SEED,
    refine: bool = True,
) -> ImageSummary:
    """Sample U on the sphere and classify its direction set.

    The sector angle is phi = 2*pi minus the largest direction gap when
    that gap is confirmed (above 3x sample spacing, surviving adaptive
    refinement for n = 2), else 2*pi.
    """
    k = _common_degree(f, g, d)
    n = d.n
    if count is None:
        count = _default_count(n)

    if abs(k) <= 1e-12:
        c = sphere_samples(d, max(count, 1), seed)[0]
        u, v = float(f.evaluate(c)), float(g.evaluate(c))
        dirs = np.array([math.atan2(v, u)]) if math.hypot(u, v) > 0 else np.array([])
        return ImageSummary(
            classification=ImageClass.SINGLETON,
            phi=0.0,
            largest_gap=TWO_PI,
            directions=dirs,
            sample_count=count,
            seed=seed,
            degree=k,
            scatter=np.array([[0.0, u, v]]),
        )

    X = sphere_samples(d, count, seed)
    F = f.evaluate(X)
    G = g.evaluate(X)
    if n == 2:
        params = theta_grid(count)
    else:
        params = np.arange(len(X), dtype=float)
    scatter = np.column_stack([params[: len(F)], F, G])

    scale = max(1.0, float(np.max(np.abs(F))), float(np.max(np.abs(G))))
    ztol = 1e-12 * scale
    nz = np.hypot(F, G) > ztol
    if not np.any(nz):
        raise DegenerateImageError("every sample maps to (0, 0)")

    dirs = np.arctan2(G[nz], F[nz])
    gap_tol = GAP_FACTOR * TWO_PI / count

    evals, complete = 0, True
    if refine and n == 2:
        extras, evals, complete = _refine_directions(
            f, g, d, params, F, G, gap_tol
        )
        if len(extras):
            dirs = np.concatenate([dirs, extras])

    dirs = np.sort(dirs)
    gaps, starts = _gap_list(dirs)
    largest = float(np.max(gaps))

    confirmed = [
        (float(starts[i]), float(starts[i] + gaps[i]))
        for i in np.nonzero(gaps > gap_tol)[0]
    ]
    boundary = sorted({_wrap_angle(edge) for a, b in confirmed for edge in (a, b)})

    if largest <= gap_tol:
        phi = TWO_PI
        cls = ImageClass.FULL_PLANE
    else:
        phi = TWO_PI - largest
        cls = ImageClass.ANGULAR_SECTOR
        if len(confirmed) == 2:
            # two narrow antipodal clusters are a line through the origin
            (a1, b1), (a2, b2) = confirmed
            arc1 = a2 - b1
            arc2 = TWO_PI - (b2 - a1)
            centers = (b1 + arc1 / 2.0, b2 + arc2 / 2.0)
            narrow = max(arc1, arc2) <= 5.0 * TWO_PI / count
            antipodal = abs(_circ_diff(centers[0], centers[1]) - math.pi) <= 5.0 * TWO_PI / count
            if narrow and antipodal:
                cls = ImageClass.LINE_THROUGH_ORIGIN

    return ImageSummary(
        classification=cls,
        phi=float(phi),
        largest_gap=largest,
        directions=dirs,
        sample_count=count,
        seed=seed,
        degree=float(k),
        gaps=confirmed,
        boundary_angles=boundary,
        refinement_evals=evals,
        refinement_complete=complete,
        scatter=scatter,
    )


# --------------------------------------------------------------- zero margin


def _quadrant_cells(initial_per_quadrant: int = 16):
    cells = []
    for q in range(4):
        a = q * math.pi / 2.0
        step = (math.pi / 2.0) / initial_per_quadrant
        for i in range(initial_per_quadrant):
            cells.append((a + i * step, a + (i + 1) * step))
    return cells

def _interval_bound_raw(p: GeneralizedPolynomial, d: Dilation, a: float, b: float):
    """Range bound of p on the raw theta arc [a, b] within one quadrant.

    On a quadrant, |cos| and |sin| are monotone and the signs of cos, sin
    are constant, so each term c*|cos|^(r1*p1)*|sin|^(r2*p2)*signs has an
    exact endpoint-product range; the term ranges are summed.
    """
    r1, r2 = d.weights
    ca, cb = abs(math.cos(a)), abs(math.cos(b))
    sa, sb = abs(math.sin(a)), abs(math.sin(b))
    clo, chi = min(ca, cb), max(ca, cb)
    slo, shi = min(sa, sb), max(sa, sb)
    tm = 0.5 * (a + b)
    sgn_c = 1.0 if math.cos(tm) >= 0 else -1.0
    sgn_s = 1.0 if math.sin(tm) >= 0 else -1.0

    lo_total, hi_total = 0.0, 0.0
    for (powers, signed), coeff in p.terms.items():
        q1, q2 = r1 * float(powers[0]), r2 * float(powers[1])
        lo = (clo ** q1) * (slo ** q2)
        hi = (chi ** q1) * (shi ** q2)
        c = coeff
        if signed[0]:
            c *= sgn_c
        if signed[1]:
            c *= sgn_s
        if c >= 0:
            lo_total += c * lo
            hi_total += c * hi
        else:
            lo_total += c * hi
            hi_total += c * lo
    return lo_total, hi_total


def _abs_lower_bound(lo: float, hi: float) -> float:
    if lo > 0:
        return lo
    if hi < 0:
        return -hi
    return 0.0


def _certify_no_common_zero_n2(f, g, d, kf, kg, threshold):
    """Branch and bound over theta cells; True when max(|f|,|g|) > threshold
    everywhere on the sphere.  Returns (certified, worst certified bound)."""
    l = d.l
    r1, r2 = d.weights
    queue = _quadrant_cells()
    worst = math.inf
    processed = 0
    while queue:
        processed += 1
        if processed > BNB_MAX_CELLS:
            return False, None
        a, b = queue.pop()
        flo, fhi = _interval_bound_raw(f, d, a, b)
        glo, ghi = _interval_bound_raw(g, d, a, b)
        lbf = _abs_lower_bound(flo, fhi)
        lbg = _abs_lower_bound(glo, ghi)
        if l != 2.0:
            # off the l=2 parametrization, points get projected by
            # eps^k; bound eps below via the radius range on the cell
            ca, cb = abs(math.cos(a)), abs(math.cos(b))
            sa, sb = abs(math.sin(a)), abs(math.sin(b))
            rad_hi = max(ca, cb) ** l + max(sa, sb) ** l
            eps_lo = rad_hi ** (-1.0 / l)
            lbf *= eps_lo ** kf
            lbg *= eps_lo ** kg
        bound = max(lbf, lbg)
        if bound > threshold:
            worst = min(worst, bound)
            continue
        if b - a <= BNB_WIDTH_FLOOR:
            return False, None
        m = 0.5 * (a + b)
        queue.append((a, m))
        queue.append((m, b))
    return True, worst


def zero_margin(
    f: GeneralizedPolynomial,
    g: GeneralizedPolynomial,
    d: Dilation,
    threshold: float = 1e-9,
    count: int | None = None,
    seed: int = DEFAULT_SEED,
) -> ZeroMargin:
    """min over sphere samples of max(|f|, |g|), with optional certification.

    A margin at zero scale is a finding (common zero), not an error.  When
    the sampled margin clears the threshold, an interval subdivision pass
    (n = 2) attempts to certify the bound on the whole sphere; n = 1 is
    exact because the sphere is {+1, -1}; higher n stays at sampled
    resolution and reports refined=False.
    """
    kf = _common_degree(f, g, d)
    kg = kf
    n = d.n
    if count is None:
        count = _default_count(n)
    X = sphere_samples(d, count, seed)
    vals = np.maximum(np.abs(f.evaluate(X)), np.abs(g.evaluate(X)))
    idx = int(np.argmin(vals))
    margin = float(vals[idx])
    witness = X[idx]

    refined = False
    cert = None
    if margin > threshold:
        if n == 1:
            refined, cert = True, margin
        elif n == 2:
            refined, cert = _certify_no_common_zero_n2(f, g, d, kf, kg, threshold)
    return ZeroMargin(
        margin=margin,
        refined=refined,
        witness=witness,
        threshold=threshold,
        sample_count=len(X),
        seed=seed,
        certified_bound=cert,
    )


# -------------------------------------------------------------- mixing curve


def mixing_curve(
    f: GeneralizedPolynomial,
    g: GeneralizedPolynomial,
    d: Dilation,
    z1,
    z2,
    steps: int = 256,
) -> np.ndarray:
    """Image of the closed curve x(t) = z1*|cos t|^r*sgn + z2*|sin t|^r*sgn.

    Returns an (steps+1, 2) array of (f, g) values with the last point
    repeating the first.  For odd f and g the curve in the image plane is
    centrally symmetric: point(t + pi) = -point(t).
    """
    if steps < 4:
        raise ValueError("steps must be at least 4")
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    if z1.shape != (d.n,) or z2.shape != (d.n,):
        raise ValueError("anchor points must match the dilation dimension")
    t = np.linspace(0.0, TWO_PI, steps + 1)
    r = np.array(d.weights)
    c, s = np.cos(t)[:, None], np.sin(t)[:, None]
    X = z1 * np.abs(c) ** r * np.sign(c) + z2 * np.abs(s) ** r * np.sign(s)
    return np.column_stack([f.evaluate(X), g.evaluate(X)])


# ----------------------------------------------------------- convexity probe


def _axis_points(n: int) -> np.ndarray:
    pts = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        pts.append(e.copy())
        e[i] = -1.0
        pts.append(e.copy())
    return np.array(pts)


def _inside_gap(direction: float, gaps, clearance: float) -> tuple[float, float] | None:
    for a, b in gaps:
        for cand in (direction, direction + TWO_PI, direction - TWO_PI):
            if a + clearance < cand < b - clearance:
                return (a, b)
    return None


def _direction_attained(f, g, d, X, dirs, target: float, tol: float, seed) -> bool:
    """Local search for a sphere point whose image direction hits target.

    A confirmed gap can be spurious where the pushforward density of
    directions vanishes (sector boundaries without the n = 2 adaptive
    refinement); a gap direction reachable by a short descent is not
    evidence that the midpoint left the image.
    """
    gap = np.abs(np.remainder(dirs - target + math.pi, TWO_PI) - math.pi)
    best_i = int(np.argmin(gap))
    best = float(gap[best_i])
    if best <= tol:
        return True
    x = X[best_i].copy()
    rng = np.random.default_rng([abs(int(seed)), int(round(target * 1e6)) % (2 ** 32)])
    scale = max(1.0, float(np.max(np.abs(X))))
    step = 0.3
    for _ in range(60):
        moved = False
        for prop in rng.normal(size=(6, X.shape[1])):
            y = x + step * scale * prop
            if not np.any(y):
                continue
            y = d.project(y)
            u, v = float(f.evaluate(y)), float(g.evaluate(y))
            if math.hypot(u, v) <= 1e-12:
                continue
            cand = abs(math.remainder(math.atan2(v, u) - target, TWO_PI))
            if cand < best:
                best, x, moved = cand, y, True
                if best <= tol:
                    return True
        if not moved:
            step *= 0.6
            if step < 1e-6:
                break
    return best <= tol


def convexity_probe(
    f: GeneralizedPolynomial,
    g: GeneralizedPolynomial,
    d: Dilation,
    trials: int = 200,
    count: int | None = None,
    seed: int = DEFAULT_SEED,
) -> list[dict]:
    """Search for midpoints of image points that leave the image.

    Because U is a union of rays, a midpoint whose direction falls
    strictly inside a confirmed direction gap cannot be in U; each such
    pair is reported as a violation.  Pairs are drawn from a seeded
    generator plus all pairs of coordinate-axis samples, which anchor the
    probe deterministically.  Before a violation is reported, a local
    search tries to attain the midpoint direction on the sphere, which
    discards gaps that only reflect thin direction sampling.  Quadratic
    form pairs, whose image is convex, produce an empty list.
    """
    summary = sample_image(f, g, d, count=count, seed=seed)
    if not summary.gaps:
        return []
    if count is None:
        count = _default_count(d.n)
    clearance = GAP_FACTOR * TWO_PI / count

    X = sphere_samples(d, count, seed)
    pts = np.column_stack([f.evaluate(X), g.evaluate(X)])
    axis = _axis_points(d.n)
    pts_axis = np.column_stack([f.evaluate(axis), g.evaluate(axis)])

    scale = max(1.0, float(np.max(np.abs(pts))))
    ztol = 1e-12 * scale
    keep = np.hypot(pts[:, 0], pts[:, 1]) > ztol
    pts = pts[keep]
    if len(pts) < 2:
        return []

    pairs = []
    na = len(pts_axis)
    for i in range(na):
        for j in range(i + 1, na):
            pairs.append((pts_axis[i], pts_axis[j]))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        i, j = rng.integers(0, len(pts), size=2)
        if i != j:
            pairs.append((pts[i], pts[j]))

    X_kept = X[keep]
    dirs = np.arctan2(pts[:, 1], pts[:, 0])
    attained_cache: dict = {}

    violations = []
    for u, v in pairs:
        mid = 0.5 * (u + v)
        if math.hypot(mid[0], mid[1]) <= 1e-9 * scale:
            continue
        direction = math.atan2(mid[1], mid[0])
        hit = _inside_gap(direction, summary.gaps, clearance)
        if hit is None:
            continue
        key = int(round(direction / clearance))
        if key not in attained_cache:
            attained_cache[key] = _direction_attained(
                f, g, d, X_kept, dirs, direction, clearance, seed
            )
        if attained_cache[key]:
            continue
        violations.append(
            {
                "u": [float(u[0]), float(u[1])],
                "v": [float(v[0]), float(v[1])],
                "midpoint": [float(mid[0]), float(mid[1])],
                "direction": direction,
                "gap": [hit[0], hit[1]],
            }
        )
    return violations
