"""Zero-circulation radial eddies glued onto the corner hierarchy.

Each generation-k square receives one radial patch centered at its center:
vorticity +Omega_k on the core disk of radius delta_k, -|Omega_k^-| on the
annulus between sqrt(delta_k) and R_k, zero elsewhere, with

    delta_k = l_k**2 / (8 c),   R_k**2 = c * delta_k,   c > 1,
    Omega_k^+ = 4**-k / (2 pi delta_k**2),
    Omega_k^- = -Omega_k^+ delta_k**2 / (R_k**2 - delta_k).

The negative ring is tuned so each patch has zero net circulation, which
makes the induced eddy vanish identically outside its ball: the glued field
is an exact steady solution supported in the generation-k squares.

Exactness discipline: radii appear only through their squares, which are
rational; angular factors of pi are carried symbolically (stored magnitudes
are rational multiples of 1/pi); logarithms appear only in the closed-form
energy, kept as exact rational coefficients of ln 2 and ln c.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .dyadic import (
    DEFAULT_MAX_GENERATION,
    CantorCube,
    DyadicCube,
    DyadicScalar,
    cantor_generation,
    check_generation,
    generation_level,
)
from .extscalar import ExtScalar, sqrt_fraction
from .measure import (
    LN2,
    MorreyConfig,
    MorreyReport,
    PerLevelEntry,
    _assert_corner_separation,
    _entry_value,
    _finalize_report,
    _floor_at_level,
)

PI_EXT = ExtScalar.from_float(math.pi)


class CapabilityError(RuntimeError):
    """Requested numeric method cannot run at this scale (e.g. float quadrature)."""


# ---------------------------------------------------------------------------
# patch parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PatchParams:
    """Exact parameter tuple of generation k with annulus constant c > 1.

    ``q_plus``/``q_minus`` are pi-scaled vorticity amplitudes: the physical
    values are q/pi.  ``delta`` is the core radius (not squared); ``r2`` is
    the squared outer radius c*delta.  The outer radius itself is irrational
    and never materialized.
    """

    k: int
    c: Fraction
    delta: Fraction
    r2: Fraction
    q_plus: Fraction
    q_minus: Fraction
    max_generation: int = DEFAULT_MAX_GENERATION

    @property
    def side(self) -> Fraction:
        return Fraction(1, 1 << generation_level(self.k))

    @property
    def core_r2(self) -> Fraction:
        """Squared core radius delta**2."""
        return self.delta * self.delta

    @property
    def inner_r2(self) -> Fraction:
        """Squared annulus inner radius (sqrt delta)**2 = delta."""
        return self.delta

    def omega_plus(self) -> ExtScalar:
        return ExtScalar.from_fraction(self.q_plus) / PI_EXT

    def omega_minus(self) -> ExtScalar:
        return ExtScalar.from_fraction(self.q_minus) / PI_EXT

    def centers(self) -> list[tuple[DyadicScalar, DyadicScalar]]:
        return [c.center for c in cantor_generation(self.k, self.max_generation)]

    def reference_center(self) -> tuple[DyadicScalar, DyadicScalar]:
        """Center of the all-low square; every patch is grid-congruent to it."""
        node = CantorCube(0, ())
        for _ in range(self.k):
            node = node.children()[0]
        return node.center


def patch_params(
    k: int, c: Fraction = Fraction(2), max_generation: int = DEFAULT_MAX_GENERATION
) -> PatchParams:
    """Build the exact parameters; fails if the annulus degenerates (c <= 1)."""
    check_generation(k, max_generation)
    c = Fraction(c)
    if c <= 1:
        raise ValueError(f"annulus constant must exceed 1, got {c}")
    side_sq = Fraction(1, 1 << (2 * generation_level(k)))
    delta = side_sq / (8 * c)
    r2 = c * delta
    # ball containment in the square: (2 R)^2 = 4 c delta = side^2 / 2 < side^2
    assert 4 * r2 < side_sq
    q_plus = Fraction(1, 1 << (2 * k)) / (2 * delta * delta)
    q_minus = -q_plus * delta * delta / (r2 - delta)
    return PatchParams(k, c, delta, r2, q_plus, q_minus, max_generation)


# ---------------------------------------------------------------------------
# radial profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialSpeed:
    """Piecewise radial speed of one eddy, driven entirely by squared radii.

    ``pi * r * |u|(r)`` is a rational function of r**2 with breakpoints at
    delta**2, delta and c*delta; continuity at the breakpoints and the zero
    at the outer radius are exact rational identities.
    """

    params: PatchParams

    def breakpoints_r2(self) -> tuple[Fraction, Fraction, Fraction]:
        p = self.params
        return (p.core_r2, p.inner_r2, p.r2)

    def r_speed_pi(self, r2: Fraction) -> Fraction:
        """pi * r * |u|(r) at squared radius r2, exact."""
        if r2 < 0:
            raise ValueError("squared radius must be nonnegative")
        p = self.params
        if r2 < p.core_r2:
            return r2 * p.q_plus / 2
        if r2 < p.inner_r2:
            return p.core_r2 * p.q_plus / 2
        if r2 < p.r2:
            return (p.core_r2 * p.q_plus + p.q_minus * (r2 - p.delta)) / 2
        return Fraction(0)

    def speed(self, r2: Fraction) -> ExtScalar:
        rs = self.r_speed_pi(r2)
        if rs == 0:
            return ExtScalar.ZERO
        return ExtScalar.from_fraction(rs) / (PI_EXT * sqrt_fraction(r2))

    def speed_float(self, r: float) -> float:
        p = self.params
        dp, r2v, qp, qm = float(p.delta), float(p.r2), float(p.q_plus), float(p.q_minus)
        if r <= 0.0:
            return 0.0
        rr = r * r
        if rr < dp * dp:
            return r * qp / (2.0 * math.pi)
        if rr < dp:
            return dp * dp * qp / (2.0 * math.pi * r)
        if rr < r2v:
            return (dp * dp * qp + qm * (rr - dp)) / (2.0 * math.pi * r)
        return 0.0


def speed_profile(params: PatchParams, r2: Fraction) -> ExtScalar:
    return RadialSpeed(params).speed(r2)


# ---------------------------------------------------------------------------
# pointwise fields
# ---------------------------------------------------------------------------


def locate_patch(params: PatchParams, x: DyadicScalar, y: DyadicScalar) -> Optional[CantorCube]:
    """The generation-k square containing (x, y), or None if the point sits in a gap."""
    node = CantorCube(0, ())
    if not node.to_cube().contains_point(x, y):
        return None
    for _ in range(params.k):
        for child in node.children():
            if child.to_cube().contains_point(x, y):
                node = child
                break
        else:
            return None
    return node


def _squared_distance_to_center(
    square: CantorCube, x: DyadicScalar, y: DyadicScalar
) -> tuple[Fraction, Fraction, Fraction]:
    cx, cy = square.center
    dx = (x - cx).to_fraction()
    dy = (y - cy).to_fraction()
    return dx * dx + dy * dy, dx, dy


def vorticity_scaled_at(params: PatchParams, x: DyadicScalar, y: DyadicScalar) -> Fraction:
    """pi * vorticity at an exact point: q_plus on cores, q_minus on rings, else 0."""
    square = locate_patch(params, x, y)
    if square is None:
        return Fraction(0)
    r2, _, _ = _squared_distance_to_center(square, x, y)
    if r2 < params.core_r2:
        return params.q_plus
    if params.inner_r2 <= r2 < params.r2:
        return params.q_minus
    return Fraction(0)


def vorticity_at(params: PatchParams, x: DyadicScalar, y: DyadicScalar) -> ExtScalar:
    q = vorticity_scaled_at(params, x, y)
    if q == 0:
        return ExtScalar.ZERO
    return ExtScalar.from_fraction(q) / PI_EXT


def velocity_scaled_at(
    params: PatchParams, x: DyadicScalar, y: DyadicScalar
) -> tuple[Fraction, Fraction]:
    """pi * velocity: exact rational pair (at most one eddy is active at any point)."""
    square = locate_patch(params, x, y)
    if square is None:
        return (Fraction(0), Fraction(0))
    r2, dx, dy = _squared_distance_to_center(square, x, y)
    if r2 == 0 or r2 >= params.r2:
        return (Fraction(0), Fraction(0))
    # u = |u|(r) * (-dy, dx)/r  =>  pi*u = (pi r|u| / r^2) * (-dy, dx)
    coeff = RadialSpeed(params).r_speed_pi(r2) / r2
    return (-coeff * dy, coeff * dx)


def velocity_at(params: PatchParams, x: DyadicScalar, y: DyadicScalar) -> tuple[ExtScalar, ExtScalar]:
    vx, vy = velocity_scaled_at(params, x, y)
    def conv(v: Fraction) -> ExtScalar:
        return ExtScalar.ZERO if v == 0 else ExtScalar.from_fraction(v) / PI_EXT
    return (conv(vx), conv(vy))


def patch_l1_and_circulation(params: PatchParams) -> tuple[Fraction, Fraction]:
    """Per-square L1 mass and net circulation, both exact (pi cancels).

    L1 mass = 2 pi Omega^+ delta^2 = 4**-k; circulation = pi Omega^+ delta^2
    + pi Omega^- (R^2 - delta) = 0 by the choice of the negative amplitude.
    """
    l1 = 2 * params.q_plus * params.core_r2
    circ = params.q_plus * params.core_r2 + params.q_minus * (params.r2 - params.delta)
    return (l1, circ)


# ---------------------------------------------------------------------------
# kinetic energy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyClosedForm:
    """||u_k||_{L2}^2 = (a + b*ln 2 + d*ln c) / pi with exact rational a, b, d.

    Obtained by integrating 2 pi r |u|^2 over the three branches.  The middle
    branch contributes the ln(1/delta) term whose leading part is exactly
    ln 2 / 8 after the 4**-k normalization cancels, so the energies converge
    to ln 2 / (8 pi) with an exact 4**-k-sized correction.
    """

    k: int
    c: Fraction
    a: Fraction
    b_ln2: Fraction
    d_lnc: Fraction

    def value(self) -> float:
        return (
            float(self.a) + float(self.b_ln2) * LN2 + float(self.d_lnc) * math.log(float(self.c))
        ) / math.pi

    def ext(self) -> ExtScalar:
        return ExtScalar.from_float(self.value())

    def per_patch_value(self) -> float:
        return self.value() / float(1 << (2 * self.k))


ENERGY_LIMIT = LN2 / (8.0 * math.pi)  # limit of ||u_k||^2, independent of c


def l2_closed_form(
    k: int, c: Fraction = Fraction(2), max_generation: int = DEFAULT_MAX_GENERATION
) -> EnergyClosedForm:
    check_generation(k, max_generation)
    c = Fraction(c)
    if c <= 1:
        raise ValueError("annulus constant must exceed 1")
    s = Fraction(1, 1 << (2 * k))  # 4**-k
    a = -s * c / (16 * (c - 1))
    b = s * (2 * (1 << (2 * k)) + 3) / 16
    d = s * ((c - 1) ** 2 + c * c) / (16 * (c - 1) ** 2)
    return EnergyClosedForm(k, c, a, b, d)


def l2_quadrature(k: int, c: Fraction = Fraction(2)) -> float:
    """Adaptive float quadrature of 4**k * int 2 pi r |u|^2 dr, for k <= 2 only.

    Deeper generations drive the core scale past what double-precision
    integrands can carry; the closed form is the only route there.
    """
    if k >= 3:
        raise CapabilityError(
            f"float quadrature unusable at generation {k}: core scale underflows doubles"
        )
    from scipy.integrate import quad

    params = patch_params(k, c)
    speed = RadialSpeed(params)
    dp = float(params.delta)
    r_in = math.sqrt(dp)
    r_out = math.sqrt(float(params.r2))

    def f(r: float) -> float:
        v = speed.speed_float(r)
        return 2.0 * math.pi * r * v * v

    total = 0.0
    for a, b in ((0.0, dp), (dp, r_in), (r_in, r_out)):
        val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-10, limit=300)
        total += val
    return float(1 << (2 * k)) * total


def l2_norm_squared(
    k: int,
    c: Fraction = Fraction(2),
    method: str = "closed_form",
    max_generation: int = DEFAULT_MAX_GENERATION,
):
    """Closed form (EnergyClosedForm) or the independent quadrature oracle (float)."""
    if method == "closed_form":
        return l2_closed_form(k, c, max_generation)
    if method == "quadrature":
        return l2_quadrature(k, c)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# steady-state and pairing quadrature checks
# ---------------------------------------------------------------------------


def _polar_grid(params: PatchParams, n_r: int, n_theta: int):
    """Gauss-Legendre radial nodes per branch x uniform angles."""
    import numpy as np

    dp = float(params.delta)
    r_in, r_out = math.sqrt(dp), math.sqrt(float(params.r2))
    xs, ws = np.polynomial.legendre.leggauss(n_r)
    rs, wr = [], []
    for a, b in ((0.0, dp), (dp, r_in), (r_in, r_out)):
        rs.append(0.5 * (b - a) * xs + 0.5 * (a + b))
        wr.append(0.5 * (b - a) * ws)
    r = np.concatenate(rs)
    w_r = np.concatenate(wr)
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    w_t = 2.0 * math.pi / n_theta
    return r, w_r, theta, w_t


def steady_state_residuals(
    k: int,
    c: Fraction = Fraction(2),
    n_r: int = 32,
    n_theta: int = 96,
) -> dict[str, float]:
    """Normalized quadrature residuals of the weak steady Euler identities.

    For the glued field u (a sum of disjoint rotating eddies):
      * div:      int u . grad(phi) dx     = 0 for smooth scalar phi,
      * momentum: int (u . grad)u . psi dx = 0 for smooth div-free psi,
    using that (u . grad)u = -(|u|^2/r) r_hat for a radial eddy.  Residuals
    are divided by the integral of the absolute integrand, so 1e-5 is a
    strict pass level.  Float-only; intended for k <= 1.
    """
    if k > 1:
        raise CapabilityError("steady-state quadrature battery runs at k <= 1 only")
    import numpy as np

    params = patch_params(k, c)
    speed = RadialSpeed(params)
    r, w_r, theta, w_t = _polar_grid(params, n_r, n_theta)
    v = np.array([speed.speed_float(float(rr)) for rr in r])
    cos_t, sin_t = np.cos(theta), np.sin(theta)

    # gradients of the scalar polynomials x^2 y, x^3 - 3 x y^2, x y^3
    scalar_tests: list[Callable] = [
        lambda x, y: (2 * x * y, x * x),
        lambda x, y: (3 * x * x - 3 * y * y, -6 * x * y),
        lambda x, y: (y ** 3, 3 * x * y * y),
    ]
    # div-free fields (-d/dy, d/dx) of x^2 y^2, x^3 y, and a smooth non-polynomial
    vector_tests: list[Callable] = [
        lambda x, y: (-2 * x * x * y, 2 * x * y * y),
        lambda x, y: (-(x ** 3), 3 * x * x * y),
        lambda x, y: (-np.sin(3 * y), np.sin(3 * x)),
    ]

    residuals: dict[str, float] = {}
    centers = params.centers()
    for name, tests, is_div_test in (("div", scalar_tests, True), ("momentum", vector_tests, False)):
        worst = 0.0
        for test in tests:
            acc = 0.0
            scale = 0.0
            for cx_d, cy_d in centers:
                cx, cy = float(cx_d.to_fraction()), float(cy_d.to_fraction())
                for rr, ww, vv in zip(r, w_r, v):
                    if vv == 0.0:
                        continue
                    xs = cx + rr * cos_t
                    ys = cy + rr * sin_t
                    gx, gy = test(xs, ys)
                    gx = np.broadcast_to(gx, xs.shape)
                    gy = np.broadcast_to(gy, xs.shape)
                    if is_div_test:
                        integrand = vv * (-sin_t * gx + cos_t * gy)
                    else:
                        integrand = -(vv * vv / rr) * (cos_t * gx + sin_t * gy)
                    acc += float(np.sum(integrand) * w_t * ww * rr)
                    scale += float(np.sum(np.abs(integrand)) * w_t * ww * rr)
            if scale > 0:
                worst = max(worst, abs(acc) / scale)
        residuals[name] = worst
    return residuals


def pairing_against_rotation_field(k: int, c: Fraction = Fraction(2)) -> tuple[float, float]:
    """(|int u_k . phi|, sup|phi|) for the fixed field phi = (-(y-1/2), x-1/2).

    Float quadrature oracle for the weak-convergence bound at small k.
    """
    if k > 1:
        raise CapabilityError("pairing quadrature runs at k <= 1 only")
    import numpy as np

    params = patch_params(k, c)
    speed = RadialSpeed(params)
    r, w_r, theta, w_t = _polar_grid(params, 48, 128)
    v = np.array([speed.speed_float(float(rr)) for rr in r])
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    total = 0.0
    for cx_d, cy_d in params.centers():
        cx, cy = float(cx_d.to_fraction()), float(cy_d.to_fraction())
        for rr, ww, vv in zip(r, w_r, v):
            if vv == 0.0:
                continue
            xs = cx + rr * cos_t
            ys = cy + rr * sin_t
            px = -(ys - 0.5)
            py = xs - 0.5
            integrand = vv * (-sin_t * px + cos_t * py)
            total += float(np.sum(integrand) * w_t * ww * rr)
    sup_phi = math.sqrt(2.0) / 2.0  # max over the unit square
    return abs(total), sup_phi


# ---------------------------------------------------------------------------
# certified disk-cell area machinery
# ---------------------------------------------------------------------------


def _region_range(
    px0: int, px1: int, py0: int, py1: int, Xc: int, Yc: int, thresholds
) -> tuple[int, int]:
    """Range of radial regions (number of circles at or below d^2) a cell can meet."""
    if Xc < px0:
        dxn, dxf = px0 - Xc, px1 - Xc
    elif Xc > px1:
        dxn, dxf = Xc - px1, Xc - px0
    else:
        dxn, dxf = 0, max(Xc - px0, px1 - Xc)
    if Yc < py0:
        dyn, dyf = py0 - Yc, py1 - Yc
    elif Yc > py1:
        dyn, dyf = Yc - py1, Yc - py0
    else:
        dyn, dyf = 0, max(Yc - py0, py1 - Yc)
    d2n = dxn * dxn + dyn * dyn
    d2f = dxf * dxf + dyf * dyf
    region_min = 0
    region_max = 0
    for p_shift, q in thresholds:
        if d2n * q >= p_shift:
            region_min += 1
        if d2f * q >= p_shift:
            region_max += 1
    return region_min, region_max


def cell_pi_mass_bounds(
    center: tuple[DyadicScalar, DyadicScalar],
    circles: list[Fraction],
    densities: list[Fraction],
    cube: DyadicCube,
    target_rel: float = 2.0 ** -9,
    max_cells: int = 60_000,
) -> tuple[Fraction, Fraction]:
    """Certified bounds on pi * integral of a radial step density over a cube.

    ``circles`` are increasing squared radii around ``center``; ``densities``
    (length len(circles)+1, pi-scaled) hold the value between consecutive
    circles.  Quadrisection is driven by a priority queue on the potential
    error area * (dmax - dmin), which balances work between the small
    high-density core circle and the large low-density outer circle.  The
    returned bounds are exact rationals and always valid; the budget only
    controls their width.
    """
    cx, cy = center
    e_c = max(cx.exp2, cy.exp2, 0)
    depth_cap = cube.level + 48
    W = max(e_c, depth_cap)
    Xc = cx.mantissa << (W - cx.exp2)
    Yc = cy.mantissa << (W - cy.exp2)
    thresholds = [(f.numerator << (2 * W), f.denominator) for f in circles]
    dens_float = [float(d) for d in densities]

    resolved: dict[tuple[int, int], int] = {}  # (density_index, level) -> cell count
    undecided_final: list[tuple[int, int, int]] = []  # (region_min, region_max, level)
    heap: list[tuple[float, int, int, int, int, int]] = []
    err_total = 0.0
    hi_float = 0.0

    def classify(s: int, ax: int, ay: int):
        nonlocal err_total, hi_float
        shift = W - s
        px0, px1 = ax << shift, (ax + 1) << shift
        py0, py1 = ay << shift, (ay + 1) << shift
        rmin, rmax = _region_range(px0, px1, py0, py1, Xc, Yc, thresholds)
        area_f = 4.0 ** -s
        if rmin == rmax or all(
            densities[i] == densities[rmin] for i in range(rmin, rmax + 1)
        ):
            resolved[(rmin, s)] = resolved.get((rmin, s), 0) + 1
            hi_float += area_f * dens_float[rmin]
            return
        dmin = min(dens_float[rmin : rmax + 1])
        dmax = max(dens_float[rmin : rmax + 1])
        err = area_f * (dmax - dmin)
        err_total += err
        hi_float += area_f * dmax
        heapq.heappush(heap, (-err, s, ax, ay, rmin, rmax))

    classify(cube.level, cube.ix, cube.iy)
    cells = 1
    while heap and cells < max_cells:
        if err_total <= target_rel * max(hi_float, 1e-300):
            break
        neg_err, s, ax, ay, rmin, rmax = heapq.heappop(heap)
        if s >= depth_cap - 1:
            undecided_final.append((rmin, rmax, s))
            continue
        err_total += neg_err  # remove this cell's share
        hi_float -= (4.0 ** -s) * max(dens_float[rmin : rmax + 1])
        for bx, by in ((0, 0), (1, 0), (0, 1), (1, 1)):
            classify(s + 1, ax * 2 + bx, ay * 2 + by)
        cells += 4

    # drain anything still queued into the undecided bucket
    for neg_err, s, ax, ay, rmin, rmax in heap:
        undecided_final.append((rmin, rmax, s))

    lo = Fraction(0)
    hi = Fraction(0)
    for (di, s), count in sorted(resolved.items()):
        contrib = densities[di] * Fraction(count, 1 << (2 * s))
        lo += contrib
        hi += contrib
    for rmin, rmax, s in undecided_final:
        area = Fraction(1, 1 << (2 * s))
        lo += area * min(densities[rmin : rmax + 1])
        hi += area * max(densities[rmin : rmax + 1])
    return lo, hi


# ---------------------------------------------------------------------------
# norm of the eddy vorticity (absolutely continuous measure)
# ---------------------------------------------------------------------------


class PatchDensityMeasure:
    """|vorticity| of generation k as a measure, with a certified norm search."""

    def __init__(self, params: PatchParams):
        self.params = params
        p = params
        self._circles = [p.core_r2, p.inner_r2, p.r2]
        self._densities = [p.q_plus, Fraction(0), -p.q_minus, Fraction(0)]
        self._center = params.reference_center()

    # -- per-cube masses ----------------------------------------------------

    def coarse_cube_mass(self, cube: DyadicCube) -> Fraction:
        """Exact |vorticity| mass of a cube at level <= 4**k (whole patches)."""
        p = self.params
        if cube.level > generation_level(p.k):
            raise ValueError("coarse masses need level <= the patch-square level")
        count = 0
        for sq in cantor_generation(p.k, p.max_generation):
            if cube.contains_cube(sq.to_cube()):
                count += 1
        return Fraction(count, 1 << (2 * p.k))

    def deep_cube_pi_mass_bounds(
        self, cube: DyadicCube, target_rel: float = 2.0 ** -9, max_cells: int = 60_000
    ) -> tuple[Fraction, Fraction]:
        """Certified pi-scaled mass bounds for a cube below the patch-square level."""
        p = self.params
        if cube.level <= generation_level(p.k):
            raise ValueError("deep bounds need level > the patch-square level")
        x0, y0 = cube.corner
        sq = locate_patch(p, x0, y0)
        if sq is None:
            return (Fraction(0), Fraction(0))
        return cell_pi_mass_bounds(
            sq.center, self._circles, self._densities, cube, target_rel, max_cells
        )

    def cube_mass_bounds_float(self, cube: DyadicCube) -> tuple[float, float]:
        """True-mass float bounds for any level; test-oracle convenience."""
        if cube.level <= generation_level(self.params.k):
            m = float(self.coarse_cube_mass(cube))
            return (m, m)
        lo, hi = self.deep_cube_pi_mass_bounds(cube)
        return (float(lo) / math.pi, float(hi) / math.pi)

    # -- norm search -----------------------------------------------------------

    def _nu_interior(self) -> int:
        """Smallest level whose center-cornered cube sits inside the core disk."""
        p = self.params
        nu = generation_level(p.k) + 1
        while Fraction(2, 1 << (2 * nu)) > p.core_r2:
            nu += 1
        return nu

    def _interior_annulus_candidate(self, nu: int) -> Optional[tuple[Fraction, DyadicCube]]:
        """A verified annulus-interior cube at level nu and its exact pi-mass."""
        p = self.params
        cx, cy = self._center
        r_mid = math.sqrt(float((p.inner_r2 + p.r2) / 2))
        x_probe = float(cx.to_fraction()) + r_mid
        iy0 = _floor_at_level(cy, nu)
        ix0 = int(x_probe * (1 << nu))
        size = 1 << nu
        for dix in (0, -1, 1, -2, 2):
            for diy in (0, -1, 1):
                ix, iy = ix0 + dix, iy0 + diy
                if not (0 <= ix < size and 0 <= iy < size):
                    continue
                cube = DyadicCube(nu, ix, iy)
                lo, hi = cell_pi_mass_bounds(
                    self._center, self._circles, self._densities, cube, max_cells=1
                )
                target = (-p.q_minus) * cube.area()
                if lo == hi == target:
                    return target, cube
        return None

    def _ring_cubes(self, nu: int, budget: int) -> Iterable[DyadicCube]:
        p = self.params
        cx, cy = self._center
        t = 0
        while Fraction(1, 1 << (2 * (t + 1))) >= p.r2:
            t += 1
        r_hi = Fraction(1, 1 << t)  # dyadic upper bound of the outer radius
        scale = 1 << nu
        ix0 = max(0, math.floor((cx.to_fraction() - r_hi) * scale))
        ix1 = min(scale - 1, math.floor((cx.to_fraction() + r_hi) * scale))
        iy0 = max(0, math.floor((cy.to_fraction() - r_hi) * scale))
        iy1 = min(scale - 1, math.floor((cy.to_fraction() + r_hi) * scale))
        count = (ix1 - ix0 + 1) * (iy1 - iy0 + 1)
        if count > budget:
            raise CapabilityError(
                f"level {nu} ring enumeration needs {count} cubes (budget {budget})"
            )
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                yield DyadicCube(nu, ix, iy)

    def morrey_report(self, cfg: MorreyConfig) -> MorreyReport:
        """Certified norm search over dyadic levels 1..max_level.

        Level regimes:
          * coarse (nu <= 4**k): cubes hold whole patches, per-level max mass
            4**-g under the same ownership argument as for the limit measure;
          * window (4**k < nu < nu_interior): enumerate cubes around one patch
            center plus, when no annulus-interior cube is verifiable yet, the
            whole annulus ring, with certified subdivision bounds;
          * deep (nu >= nu_interior): a full-density core-interior cube exists
            at the center grid point, so the per-level max is exactly
            q+ * 4**-nu / pi (no straddling cube can beat it).
        All patches are grid-congruent (centers agree mod 2**-nu for
        nu > 4**k), so one reference patch suffices.
        """
        p = self.params
        base = generation_level(p.k)
        cap = 4 * base + 24
        if cfg.max_level > cap:
            raise ValueError(
                f"max_level {cfg.max_level} beyond supported depth {cap} for generation {p.k}"
            )
        entries: list[PerLevelEntry] = []
        notes = ["window/deep masses are pi-scaled rationals (true mass = value/pi)"]

        g = 1
        level = 1
        while level <= min(cfg.max_level, base):
            hi_level = min(generation_level(g), cfg.max_level, base)
            _assert_corner_separation(g, level, p.max_generation)
            mass = Fraction(1, 1 << (2 * g))
            for nu in range(level, hi_level + 1):
                value, value_exact = _entry_value(cfg, nu, mass)
                entries.append(
                    PerLevelEntry(nu, mass, mass, value, value_exact, DyadicCube(nu, 0, 0))
                )
            level = generation_level(g) + 1
            g += 1

        if cfg.max_level <= base:
            return _finalize_report(cfg, entries, notes)

        nu_int = self._nu_interior()
        cx, cy = self._center

        def pi_entry(nu: int, lo: Fraction, hi: Fraction, witness: DyadicCube) -> PerLevelEntry:
            w_exact = cfg.weight_exact(nu)
            if w_exact is not None:
                val = ExtScalar.from_fraction(w_exact * hi) / PI_EXT
            else:
                val = cfg.weight_ext(nu) * ExtScalar.from_fraction(hi) / PI_EXT
            return PerLevelEntry(nu, lo, hi, val, None, witness, lo == hi, "1/pi")

        for nu in range(base + 1, min(cfg.max_level, nu_int - 1) + 1):
            candidates: list[list] = []
            icx, icy = _floor_at_level(cx, nu), _floor_at_level(cy, nu)
            size = 1 << nu
            for dx in range(-2, 3):
                for dy in range(-2, 3):
                    ix, iy = icx + dx, icy + dy
                    if 0 <= ix < size and 0 <= iy < size:
                        cube = DyadicCube(nu, ix, iy)
                        lo, hi = cell_pi_mass_bounds(
                            self._center, self._circles, self._densities, cube,
                            target_rel=2.0 ** -4, max_cells=600,
                        )
                        candidates.append([lo, hi, cube, False])
            ann = self._interior_annulus_candidate(nu)
            if ann is not None:
                val, cube = ann
                candidates.append([val, val, cube, True])
            else:
                for cube in self._ring_cubes(nu, budget=250_000):
                    lo, hi = cell_pi_mass_bounds(
                        self._center, self._circles, self._densities, cube,
                        target_rel=2.0 ** -4, max_cells=400,
                    )
                    candidates.append([lo, hi, cube, False])
            # refine whichever candidate currently holds the best upper bound
            for _ in range(8):
                candidates.sort(key=lambda t: (-(t[0] + t[1]), t[2].ix, t[2].iy))
                best = max(candidates, key=lambda t: (t[1], -t[2].ix, -t[2].iy))
                if best[3] or best[0] == best[1]:
                    break
                width_ok = best[1] - best[0] <= best[1] * Fraction(1, 1 << 8)
                second_hi = max((t[1] for t in candidates if t is not best), default=Fraction(0))
                if width_ok and best[0] >= second_hi:
                    break
                lo, hi = cell_pi_mass_bounds(
                    self._center, self._circles, self._densities, best[2],
                    target_rel=2.0 ** -9, max_cells=40_000,
                )
                best[0], best[1], best[3] = lo, hi, True
            best = max(candidates, key=lambda t: (t[1], -t[2].ix, -t[2].iy))
            entries.append(pi_entry(nu, best[0], best[1], best[2]))

        for nu in range(max(base + 1, nu_int), cfg.max_level + 1):
            mass = p.q_plus * Fraction(1, 1 << (2 * nu))
            witness = DyadicCube(nu, _floor_at_level(cx, nu), _floor_at_level(cy, nu))
            entries.append(pi_entry(nu, mass, mass, witness))

        return _finalize_report(cfg, entries, notes)


def density_morrey_norm(
    k: int,
    cfg: MorreyConfig,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> MorreyReport:
    """Norm report for the absolutely continuous |vorticity| of generation k."""
    return PatchDensityMeasure(patch_params(k, c, max_generation)).morrey_report(cfg)


# ---------------------------------------------------------------------------
# single-signed scaling baseline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledDiskMeasure:
    """|curl| of the classical scaled single-sign eddy.

    Density (ln(1/eps))**-1/2 * eps**-2 on the quarter of the eps-disk at the
    origin visible inside the unit square.  With eps = 2**-L the per-level
    maxima are closed form:

      * nu <= L: the corner cube [0, 2**-nu)^2 contains the whole visible
        quarter disk (mass (pi/4) * (ln(1/eps))**-1/2) and no cube holds more;
      * nu >= L+1: the corner cube sits fully inside the disk (its far corner
        is at distance sqrt(2) * 2**-nu <= eps), so the per-level max equals
        the density bound density * 4**-nu, attained there.
    """

    L: int  # eps = 2**-L

    @property
    def eps(self) -> Fraction:
        return Fraction(1, 1 << self.L)

    def prefactor(self) -> float:
        """density * eps^2 = (ln(1/eps))**-1/2."""
        return 1.0 / math.sqrt(self.L * LN2)

    def quarter_mass(self) -> float:
        return self.prefactor() * math.pi / 4.0

    def morrey_report(self, cfg: MorreyConfig) -> MorreyReport:
        entries: list[PerLevelEntry] = []
        for nu in range(1, cfg.max_level + 1):
            if nu <= self.L:
                mass_f = self.quarter_mass()
            else:
                mass_f = self.prefactor() / float(1 << (2 * (nu - self.L)))
            value = cfg.weight_ext(nu) * ExtScalar.from_float(mass_f)
            approx = Fraction(mass_f)
            e = PerLevelEntry(nu, approx, approx, value, None, DyadicCube(nu, 0, 0), False)
            entries.append(e)
        return _finalize_report(
            cfg,
            entries,
            ["closed-form quarter-disk maxima; stored masses are float approximations"],
        )


def dm_scaling_report(eps, alpha: Fraction, max_level: Optional[int] = None) -> MorreyReport:
    """Norm report for the scaled single-sign eddy at dyadic eps = 2**-L < 1."""
    if isinstance(eps, DyadicScalar):
        eps = eps.to_fraction()
    eps = Fraction(eps)
    if eps >= 1:
        raise ValueError(f"scaling parameter must be < 1, got {eps}")
    if eps <= 0 or eps.numerator != 1 or (eps.denominator & (eps.denominator - 1)):
        raise ValueError(f"scaling parameter must be a power of two, got {eps}")
    L = eps.denominator.bit_length() - 1
    if max_level is None:
        max_level = 2 * L + 10
    cfg = MorreyConfig(alpha=Fraction(alpha), log_base="2", max_level=max_level)
    return ScaledDiskMeasure(L).morrey_report(cfg)


def dm_scaling_morrey(eps, alpha: Fraction, max_level: Optional[int] = None) -> ExtScalar:
    return dm_scaling_report(eps, alpha, max_level).norm_value
