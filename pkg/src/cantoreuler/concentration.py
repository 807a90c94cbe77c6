"""Energy localization: defect profiles, weak-convergence bounds, blow-up indices.

The glued eddy fields store energy in identical per-patch parcels, so the
fraction of kinetic energy inside a dyadic cube is an exact rational: the
number of patch centers in the cube times 4**-k, which is precisely the mass
the generation-k atomic measure gives the cube.  Letting k grow, the fraction
stabilizes to the limit measure of the cube: energy concentrates exactly where
the limit measure lives, while the fields themselves pair to zero against any
fixed test field at a doubly exponential rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dyadic import (
    DEFAULT_MAX_GENERATION,
    DyadicCube,
    check_generation,
    generation_level,
)
from .extscalar import ExtScalar, log2_fraction, sqrt_fraction
from .measure import omega_cube, omega_k_cube, stabilization_generation
from .sparse import SparseFamily, generation_towers
from .vortex import EnergyClosedForm, l2_closed_form


# ---------------------------------------------------------------------------
# energy per cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeEnergy:
    """Exact energy bookkeeping for one cube at one generation."""

    k: int
    cube: DyadicCube
    patch_count: int
    fraction: Fraction  # patch_count * 4**-k, an exact rational
    energy: float       # patch_count * per-patch energy


def energy_in_cube(
    k: int,
    cube: DyadicCube,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> CubeEnergy:
    """Energy of the generation-k field inside a dyadic cube.

    Requires level(cube) <= 4**k so that every patch ball lies entirely
    inside or outside the cube (balls sit inside their squares); the energy
    is then an exact multiple of the per-patch closed-form energy.
    """
    check_generation(k, max_generation)
    if cube.level > generation_level(k):
        raise ValueError(
            f"cube level {cube.level} exceeds the generation level {generation_level(k)}: "
            "patch balls could straddle the cube"
        )
    frac = omega_k_cube(k, cube, max_generation)
    count = int(frac * (1 << (2 * k)))
    closed = l2_closed_form(k, c, max_generation)
    return CubeEnergy(k, cube, count, frac, count * closed.per_patch_value())


def energy_fraction(
    k: int,
    cube: DyadicCube,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> Fraction:
    """Share of ||u_k||^2 carried by the cube: exact, the per-patch energy cancels."""
    return energy_in_cube(k, cube, c, max_generation).fraction


# ---------------------------------------------------------------------------
# reduced defect profile
# ---------------------------------------------------------------------------


@dataclass
class DefectReport:
    """Per-generation energies on a cube and their stabilized fraction.

    The energy fraction equals the generation-k atomic mass of the cube for
    every admissible k and stabilizes to the limit measure's value; the local
    energy therefore converges to (limit of total energies) * omega(cube).
    The report keeps the whole trajectory rather than extrapolating.
    """

    cube: DyadicCube
    per_k_energy: list[tuple[int, float]]
    per_k_fraction: list[tuple[int, Fraction]]
    stabilized_fraction: Fraction
    omega_value: Fraction
    energy_limit_factor: float  # limit of ||u_k||^2


def reduced_defect(
    cube: DyadicCube,
    k_max: int,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> DefectReport:
    k_min = stabilization_generation(cube.level)
    if k_min > k_max:
        raise ValueError(f"cube level {cube.level} needs generation >= {k_min}")
    energies = []
    fractions = []
    for k in range(k_min, k_max + 1):
        e = energy_in_cube(k, cube, c, max_generation)
        energies.append((k, e.energy))
        fractions.append((k, e.fraction))
    from .vortex import ENERGY_LIMIT

    return DefectReport(
        cube=cube,
        per_k_energy=energies,
        per_k_fraction=fractions,
        stabilized_fraction=fractions[-1][1],
        omega_value=omega_cube(cube, max_generation),
        energy_limit_factor=ENERGY_LIMIT,
    )


# ---------------------------------------------------------------------------
# weak-convergence bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakPairingBound:
    """sqrt(support area) * L2 norm: bounds |int u_k . phi| / sup|phi|."""

    k: int
    support_area: Fraction      # 4**k * l_k**2, exact
    energy: EnergyClosedForm
    value: ExtScalar
    log2_value: float


def weak_pairing_bound(
    k: int,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> WeakPairingBound:
    """Exact support area 4**k * l_k**2 paired with the closed-form energy.

    The support of the generation-k field lies in the union of its squares,
    whose total area decays doubly exponentially while the L2 norm stays
    bounded below: the coexistence of weak convergence to zero with
    non-vanishing energy.
    """
    check_generation(k, max_generation)
    area = Fraction(1 << (2 * k), 1 << (2 * generation_level(k)))
    energy = l2_closed_form(k, c, max_generation)
    value = sqrt_fraction(area) * ExtScalar.from_float(math.sqrt(energy.value()))
    log2_value = log2_fraction(area) / 2.0 + math.log2(energy.value()) / 2.0
    return WeakPairingBound(k, area, energy, value, log2_value)


# ---------------------------------------------------------------------------
# small-scale square-sum blow-up for the eddy family
# ---------------------------------------------------------------------------


@dataclass
class VortexSparseBound:
    """Reproduction of the tower square-sum estimate for the eddy family.

    For threshold index N the estimate is evaluated on the corner towers of
    generation K = 2N (a member of the eddy family; all its tower cubes have
    side below the threshold 2**-(4**N)), multiplying the core amplitude by
    the l2 norm of the tower areas:

        value = Omega_K^+ * (sum over squares m, levels j in (4**K, 4**(K+1)]
                 of (4**-j)**2 )**(1/2).

    The log2 of the value is reported exactly up to float rounding of the
    order-one factor; the doubly exponential growth in N is the desk-scale
    witness of the family's square-sum blow-up.
    """

    N: int
    generation_used: int
    tower_count: int
    cubes_per_tower: int
    log2_value: float
    value: ExtScalar
    threshold_level: int

    def family(self, max_generation: int = DEFAULT_MAX_GENERATION) -> SparseFamily:
        """Materialize the underlying towers (small N only)."""
        return generation_towers(self.generation_used, max_generation)


def vortex_sparse_lower_bound(
    N: int,
    c: Fraction = Fraction(2),
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> VortexSparseBound:
    if N < 1:
        raise ValueError("threshold index N must be >= 1")
    if N > max_generation - 1:
        raise ValueError(f"threshold index N must be <= {max_generation - 1}")
    K = 2 * N
    base = generation_level(K)
    lo, hi = base + 1, generation_level(K + 1)
    # sum over j in (4**K, 4**(K+1)] of (4**-j)**2 = 16**-j, closed geometric form
    params_area_sum = (Fraction(1, 16) ** lo - Fraction(1, 16) ** (hi + 1)) / (1 - Fraction(1, 16))
    tower_count = 1 << (2 * K)
    q_plus = patch_params_q_plus(K, c)
    total_sq = q_plus * q_plus * tower_count * params_area_sum  # (pi*value)**2
    log2_value = log2_fraction(total_sq) / 2.0 - math.log2(math.pi)
    value = sqrt_fraction(total_sq) / ExtScalar.from_float(math.pi)
    return VortexSparseBound(
        N=N,
        generation_used=K,
        tower_count=tower_count,
        cubes_per_tower=hi - lo + 1,
        log2_value=log2_value,
        value=value,
        threshold_level=generation_level(N),
    )


def patch_params_q_plus(k: int, c: Fraction = Fraction(2)) -> Fraction:
    """pi * Omega_k^+ without materializing deep coordinates."""
    c = Fraction(c)
    if c <= 1:
        raise ValueError("annulus constant must exceed 1")
    side_sq = Fraction(1, 1 << (2 * generation_level(k)))
    delta = side_sq / (8 * c)
    return Fraction(1, 1 << (2 * k)) / (2 * delta * delta)


# ---------------------------------------------------------------------------
# dimension-zero certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionCertificate:
    """Witness that the limit set has zero dimension at tolerance (gamma, delta).

    ``m`` is the smallest generation with l_m**gamma * 4**m < delta and
    l_m < delta simultaneously; both comparisons are exact rational
    inequalities (raised to the gamma denominator).
    """

    gamma: Fraction
    delta: Fraction
    m: int
    cover_value_log2: float   # log2 of l_m**gamma * 4**m
    side_value_log2: float    # log2 of l_m
    checks: tuple[bool, bool]


def _cover_condition(m: int, gamma: Fraction, delta: Fraction) -> bool:
    """l_m**gamma * 2**(2m) < delta, exactly."""
    p, q = gamma.numerator, gamma.denominator
    # raise to the q-th power: 2**(2mq - p*4**m) < delta**q
    lhs_exp = 2 * m * q - p * (4 ** m)
    lhs = Fraction(1 << lhs_exp) if lhs_exp >= 0 else Fraction(1, 1 << (-lhs_exp))
    return lhs < delta ** q


def _side_condition(m: int, delta: Fraction) -> bool:
    return Fraction(1, 1 << (4 ** m)) < delta


def dimension_zero_certificate(
    gamma: Fraction, delta: Fraction, m_cap: int = 64
) -> DimensionCertificate:
    gamma, delta = Fraction(gamma), Fraction(delta)
    if gamma <= 0 or delta <= 0:
        raise ValueError("gamma and delta must be positive")
    for m in range(0, m_cap + 1):
        cover = _cover_condition(m, gamma, delta)
        side = _side_condition(m, delta)
        if cover and side:
            cover_log2 = 2 * m - float(gamma) * (4 ** m)
            side_log2 = -float(4 ** m)
            return DimensionCertificate(gamma, delta, m, cover_log2, side_log2, (cover, side))
    raise RuntimeError("no certificate found below the generation cap (unreachable)")
