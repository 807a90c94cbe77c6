"""Sparse cube families, corner towers, and the diverging square-sum profile.

A family of dyadic cubes is *sparse* when each cube owns a measurable witness
subset of at least half its area and the witnesses are pairwise disjoint.
Packings are sparse with witness = cube; the families built here are nested
corner towers whose witnesses are the L-shaped difference between consecutive
cubes (area ratio exactly 3/4 per halving step).

The tower of generation k at corner square m is the chain of dyadic cubes
anchored at that square's lower-left corner, one per level from 4**k + 1 down
to 4**(k+1).  Every tower cube contains exactly the all-low child of the next
generation and nothing else of it, so the limit measure gives each tower cube
exactly 4**-(k+1); the square-sum over one whole generation is then

    4**k towers * 3*4**k cubes * (4**-(k+1))**2 = 3/16,

independent of k, which is what makes the cumulative sums grow linearly and
the small-scale square-sum indices diverge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .dyadic import (
    DEFAULT_MAX_GENERATION,
    DyadicCube,
    cantor_generation,
    check_generation,
    generation_level,
)
from .extscalar import ExtScalar, sqrt_fraction


@dataclass(frozen=True)
class Witness:
    """Witness set of one cube: the cube itself, minus an optional sub-cube."""

    cube: DyadicCube
    hole: Optional[DyadicCube] = None

    def __post_init__(self):
        if self.hole is not None and not self.cube.contains_cube(self.hole):
            raise ValueError("witness hole must sit inside its cube")

    def area(self) -> Fraction:
        a = self.cube.area()
        if self.hole is not None:
            a -= self.hole.area()
        return a

    def ratio(self) -> Fraction:
        return self.area() / self.cube.area()


@dataclass(frozen=True)
class SparseFamily:
    """A finite list of dyadic cubes with per-cube witnesses."""

    witnesses: tuple[Witness, ...]

    @property
    def cubes(self) -> tuple[DyadicCube, ...]:
        return tuple(w.cube for w in self.witnesses)

    def __len__(self) -> int:
        return len(self.witnesses)

    @staticmethod
    def packing(cubes: Sequence[DyadicCube]) -> "SparseFamily":
        return SparseFamily(tuple(Witness(c) for c in cubes))

    def union(self, other: "SparseFamily") -> "SparseFamily":
        return SparseFamily(self.witnesses + other.witnesses)


@dataclass(frozen=True)
class TowerSpec:
    """Descriptor of one corner tower: generation, square index, level range, anchor."""

    k: int
    m: int
    level_lo: int
    level_hi: int
    anchor_ix: int
    anchor_iy: int

    @property
    def cardinality(self) -> int:
        return self.level_hi - self.level_lo + 1


def tower_spec(k: int, m: int, max_generation: int = DEFAULT_MAX_GENERATION) -> TowerSpec:
    check_generation(k, max_generation)
    if k + 1 > max_generation:
        raise ValueError(f"tower of generation {k} needs generation {k + 1} coordinates")
    n = 1 << (2 * k)
    if not (1 <= m <= n):
        raise ValueError(f"square index m must be in 1..{n}, got {m}")
    cube = cantor_generation(k, max_generation)[m - 1]
    cx, cy = cube.corner_ints()
    # tower levels run from 4**k + 1 (literal, also at k = 0) to 4**(k+1)
    return TowerSpec(k, m, 4 ** k + 1, generation_level(k + 1), cx, cy)


def build_tower(k: int, m: int, max_generation: int = DEFAULT_MAX_GENERATION) -> SparseFamily:
    """Nested corner-anchored cubes from level 4**k + 1 down to 4**(k+1).

    The anchor is the lower-left corner of the generation-k square (shared
    with its all-low descendant), so the innermost tower cube is exactly that
    generation-(k+1) square.  Witnesses are cube-minus-successor; the deepest
    cube keeps itself.  Cardinality is 4**(k+1) - 4**k = 3 * 4**k.
    """
    spec = tower_spec(k, m, max_generation)
    base_level = generation_level(k)
    cubes = [
        DyadicCube(j, spec.anchor_ix << (j - base_level), spec.anchor_iy << (j - base_level))
        for j in range(spec.level_lo, spec.level_hi + 1)
    ]
    witnesses = tuple(
        Witness(cubes[i], cubes[i + 1] if i + 1 < len(cubes) else None)
        for i in range(len(cubes))
    )
    return SparseFamily(witnesses)


def generation_towers(k: int, max_generation: int = DEFAULT_MAX_GENERATION) -> SparseFamily:
    """Union of the towers of every generation-k square."""
    fam = SparseFamily(())
    for m in range(1, (1 << (2 * k)) + 1):
        fam = fam.union(build_tower(k, m, max_generation))
    return fam


def chained_towers(k_max: int, max_generation: int = DEFAULT_MAX_GENERATION) -> SparseFamily:
    """Towers of generations 0..k_max with cross-generation witness chaining.

    The innermost cube of a generation-k tower is the all-low child square,
    which contains the top of that child's own tower; its witness hole is set
    to that successor so the union stays sparse with ratio 3/4 throughout.
    """
    witnesses: list[Witness] = []
    for k in range(0, k_max + 1):
        base_level = generation_level(k)
        for m in range(1, (1 << (2 * k)) + 1):
            spec = tower_spec(k, m, max_generation)
            cube_m = cantor_generation(k, max_generation)[m - 1]
            low_child_is_anchor = True  # all-low child shares the anchor corner
            cubes = [
                DyadicCube(j, spec.anchor_ix << (j - base_level), spec.anchor_iy << (j - base_level))
                for j in range(spec.level_lo, spec.level_hi + 1)
            ]
            for i, c in enumerate(cubes):
                if i + 1 < len(cubes):
                    hole = cubes[i + 1]
                elif k + 1 <= k_max and low_child_is_anchor:
                    hole = DyadicCube(
                        c.level + 1, c.ix << 1, c.iy << 1
                    )  # top of the child's tower, same anchor
                else:
                    hole = None
                witnesses.append(Witness(c, hole))
    return SparseFamily(tuple(witnesses))


@dataclass
class SparseCertificate:
    """Exact-arithmetic verification record for a sparse family."""

    ok: bool
    ratios: list[Fraction] = field(default_factory=list)
    failure: Optional[str] = None


def _verify_chain(ws: Sequence[Witness]) -> bool:
    """O(n) soundness check for a strictly nested chain with successor holes.

    If levels strictly increase, each cube contains the next, and each hole
    contains the next cube, then witness i and witness j > i are disjoint:
    cube_j nests inside cube_{i+1} which nests inside hole_i.
    """
    for i in range(len(ws) - 1):
        a, b = ws[i], ws[i + 1]
        if b.cube.level <= a.cube.level:
            return False
        if not a.cube.contains_cube(b.cube):
            return False
        if a.hole is None or not a.hole.contains_cube(b.cube):
            return False
    return True


def verify_sparse(fam: SparseFamily) -> tuple[bool, SparseCertificate]:
    """Check witness area ratios >= 1/2 and pairwise disjointness, exactly.

    Witnesses are cube-minus-hole shapes.  Two such witnesses are disjoint
    when their cubes are disjoint, or when one cube nests inside the other
    witness's hole.  Overlapping non-nested dyadic cubes cannot occur (grid
    nesting), and equal cubes always fail.  Single nested chains (the towers)
    verify in linear time; anything else falls back to the pairwise sweep.
    """
    half = Fraction(1, 2)
    ratios = []
    for w in fam.witnesses:
        r = w.ratio()
        ratios.append(r)
        if r < half:
            return False, SparseCertificate(False, ratios, f"witness ratio {r} < 1/2 for {w.cube}")

    ws = fam.witnesses
    if len(ws) >= 2 and _verify_chain(ws):
        return True, SparseCertificate(True, ratios)

    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            a, b = ws[i], ws[j]
            if a.cube.disjoint(b.cube):
                continue
            if a.cube == b.cube:
                return False, SparseCertificate(
                    False, ratios, f"duplicate cube {a.cube}: witnesses must overlap"
                )
            outer, inner = (a, b) if a.cube.contains_cube(b.cube) else (b, a)
            if outer.hole is None or not outer.hole.contains_cube(inner.cube):
                return False, SparseCertificate(
                    False,
                    ratios,
                    f"{inner.cube} meets the witness of {outer.cube}",
                )
    return True, SparseCertificate(True, ratios)


def sparse_partial_sum_sq(mu, fam: SparseFamily, n: int) -> Fraction:
    """Exact sum of mu(Q)**2 over family cubes with side < 2**-n."""
    total = Fraction(0)
    for c in fam.cubes:
        if c.level > n:
            v = mu.cube_mass(c)
            total += v * v
    return total


def sparse_partial_sum(mu, fam: SparseFamily, n: int) -> ExtScalar:
    """Square root of :func:`sparse_partial_sum_sq`.

    This is a certified lower bound for the level-n square-sum index of mu
    (the index is a supremum over all sparse families; any verified family
    gives a lower bound).  The family must pass :func:`verify_sparse`.
    """
    ok, cert = verify_sparse(fam)
    if not ok:
        raise ValueError(f"family is not sparse: {cert.failure}")
    return sqrt_fraction(sparse_partial_sum_sq(mu, fam, n))


@dataclass(frozen=True)
class DivergenceRow:
    k: int
    tower_count: int
    cubes_per_tower: int
    cube_mass: Fraction
    contribution: Fraction
    cumulative: Fraction


def divergence_profile(
    K: int,
    mu=None,
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> list[DivergenceRow]:
    """Per-generation exact square-sums over the corner towers, k = 1..K.

    Each tower cube Q at levels (4**k, 4**(k+1)] satisfies mu(Q) = 4**-(k+1)
    exactly; the value is computed from the measure at the top and bottom of
    each tower and propagated by monotonicity (top mass = bottom mass forces
    every intermediate nested cube to the same value).  The cumulative sums
    certify that the square-sum index at threshold level 4**l is at least
    (K - l + 1) * 3/16 -> infinity.
    """
    from .measure import OmegaMeasure

    if mu is None:
        mu = OmegaMeasure(max_generation)
    if K + 1 > max_generation:
        raise ValueError(f"profile depth {K} needs towers into generation {K + 1}")
    rows: list[DivergenceRow] = []
    cumulative = Fraction(0)
    for k in range(1, K + 1):
        squares = cantor_generation(k, max_generation)
        base_level = generation_level(k)
        lo, hi = base_level + 1, generation_level(k + 1)
        contribution = Fraction(0)
        mass_seen: Fraction | None = None
        for sq in squares:
            cx, cy = sq.corner_ints()
            top = DyadicCube(lo, cx << (lo - base_level), cy << (lo - base_level))
            bottom = DyadicCube(hi, cx << (hi - base_level), cy << (hi - base_level))
            m_top = mu.cube_mass(top)
            m_bottom = mu.cube_mass(bottom)
            if m_top != m_bottom:
                raise AssertionError(
                    f"tower masses not constant for generation {k}: {m_top} vs {m_bottom}"
                )
            mass_seen = m_top
            contribution += (hi - lo + 1) * m_top * m_top
        cumulative += contribution
        rows.append(
            DivergenceRow(
                k=k,
                tower_count=len(squares),
                cubes_per_tower=hi - lo + 1,
                cube_mass=mass_seen if mass_seen is not None else Fraction(0),
                contribution=contribution,
                cumulative=cumulative,
            )
        )
    return rows
