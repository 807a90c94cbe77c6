"""Exact dyadic rational arithmetic and the doubly-exponential corner hierarchy.

Everything in this package that touches coordinates or measure values runs on
``DyadicScalar``: an exact value ``mantissa * 2**(-exp2)`` with an arbitrary-size
integer mantissa.  The corner construction iterates side lengths

    l_0 = 1,   l_k = 2**(-4**k),

so generation 4 already lives at scale 2**-256 and generation 6 at 2**-4096.
No hardware float can represent those scales; every comparison here is an
integer comparison after shifting to a common scale.

The two-dimensional hierarchy: inside each generation-k square of side l_k,
keep the four corner squares of side l_{k+1} (lower-left, lower-right,
upper-left, upper-right).  Cubes are half-open products ``[x, x+s) x [y, y+s)``
so that each generation partitions cleanly and point membership is never
ambiguous.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
DEFAULT_MAX_GENERATION = 6

# Address codes, in canonical enumeration order.
SW, SE, NW, NE = 0, 1, 2, 3
CORNER_NAMES = ("SW", "SE", "NW", "NE")


class GenerationLimitError(RuntimeError):
    """Raised when an operation would need cubes beyond the configured depth.

    Coordinate bit-width doubles twice per generation (4**k bits), so the
    guard is a resource limit, not a numerical one.
    """


def generation_level(k: int) -> int:
    """Dyadic level of generation-k squares: side l_k = 2**(-4**k), l_0 = 1.

    Generation zero is the unit square itself (level 0); the doubly
    exponential sequence starts at k = 1.
    """
    return 0 if k == 0 else 4 ** k


def check_generation(k: int, max_generation: int = DEFAULT_MAX_GENERATION) -> None:
    if k < 0:
        raise ValueError(f"generation must be nonnegative, got {k}")
    if k > max_generation:
        raise GenerationLimitError(
            f"generation {k} exceeds configured bound {max_generation} "
            f"(coordinate bit-width would be 2^{k * 2})"
        )


class DyadicScalar:
    """Exact dyadic rational ``mantissa * 2**(-exp2)``.

    Canonical form: the mantissa is odd or zero, and zero carries exp2 = 0.
    Addition, subtraction, multiplication and comparison are exact and closed;
    division only exists by powers of two.  There is deliberately no
    ``__float__``: conversions that can overflow or round must be explicit.
    """

    __slots__ = ("mantissa", "exp2")

    def __init__(self, mantissa: int, exp2: int = 0):
        if mantissa == 0:
            self.mantissa = 0
            self.exp2 = 0
            return
        # strip trailing zero bits so the representation is unique
        shift = (mantissa & -mantissa).bit_length() - 1
        self.mantissa = mantissa >> shift
        self.exp2 = exp2 - shift

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "DyadicScalar":
        return cls(n, 0)

    @classmethod
    def pow2(cls, e: int) -> "DyadicScalar":
        """The value 2**e."""
        return cls(1, -e)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "DyadicScalar":
        d = f.denominator
        if d & (d - 1):
            raise ValueError(f"{f} is not a dyadic rational")
        return cls(f.numerator, d.bit_length() - 1)

    # -- conversions -------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exp2 >= 0:
            return Fraction(self.mantissa, 1 << self.exp2)
        return Fraction(self.mantissa << (-self.exp2), 1)

    def log2_if_power_of_two(self) -> int | None:
        if self.mantissa == 1:
            return -self.exp2
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "DyadicScalar") -> "DyadicScalar":
        e = max(self.exp2, other.exp2)
        m = (self.mantissa << (e - self.exp2)) + (other.mantissa << (e - other.exp2))
        return DyadicScalar(m, e)

    def __sub__(self, other: "DyadicScalar") -> "DyadicScalar":
        e = max(self.exp2, other.exp2)
        m = (self.mantissa << (e - self.exp2)) - (other.mantissa << (e - other.exp2))
        return DyadicScalar(m, e)

    def __mul__(self, other: "DyadicScalar") -> "DyadicScalar":
        return DyadicScalar(self.mantissa * other.mantissa, self.exp2 + other.exp2)

    def __neg__(self) -> "DyadicScalar":
        return DyadicScalar(-self.mantissa, self.exp2)

    def scale_pow2(self, e: int) -> "DyadicScalar":
        """Exact multiplication by 2**e."""
        return DyadicScalar(self.mantissa, self.exp2 - e)

    # -- comparisons ---------------------------------------------------------

    def _cmp(self, other: "DyadicScalar") -> int:
        e = max(self.exp2, other.exp2)
        a = self.mantissa << (e - self.exp2)
        b = other.mantissa << (e - other.exp2)
        return (a > b) - (a < b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicScalar):
            return NotImplemented
        return self.mantissa == other.mantissa and self.exp2 == other.exp2

    def __lt__(self, other: "DyadicScalar") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "DyadicScalar") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "DyadicScalar") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "DyadicScalar") -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash((self.mantissa, self.exp2))

    def is_zero(self) -> bool:
        return self.mantissa == 0

    @property
    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def __repr__(self) -> str:
        return f"DyadicScalar({self.mantissa}, {self.exp2})"

    def __str__(self) -> str:
        if self.mantissa.bit_length() > 4000 or abs(self.exp2) > 4000:
            # too wide for decimal rendering (int-to-str digit limits)
            return f"dyadic(mantissa~2^{self.mantissa.bit_length()}, exp2={self.exp2})"
        f = self.to_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


D_ZERO = DyadicScalar(0)
D_ONE = DyadicScalar(1)


def side_length(k: int) -> DyadicScalar:
    """l_k = 2**(-4**k) as an exact scalar (l_0 = 1)."""
    if k == 0:
        return D_ONE
    return DyadicScalar.pow2(-generation_level(k))


@dataclass(frozen=True)
class DyadicCube:
    """Grid-aligned half-open cube ``[ix, ix+1) x [iy, iy+1)`` in units 2**-level."""

    level: int
    ix: int
    iy: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        n = 1 << self.level
        if not (0 <= self.ix < n and 0 <= self.iy < n):
            raise ValueError(
                f"corner ({self.ix}, {self.iy}) outside the unit square at level {self.level}"
            )

    @property
    def side(self) -> DyadicScalar:
        return DyadicScalar.pow2(-self.level)

    @property
    def corner(self) -> tuple[DyadicScalar, DyadicScalar]:
        return (DyadicScalar(self.ix, self.level), DyadicScalar(self.iy, self.level))

    def area(self) -> Fraction:
        return Fraction(1, 1 << (2 * self.level))

    def contains_point(self, x: DyadicScalar, y: DyadicScalar) -> bool:
        cx, cy = self.corner
        s = self.side
        return cx <= x and x < cx + s and cy <= y and y < cy + s

    def contains_cube(self, other: "DyadicCube") -> bool:
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return (other.ix >> shift) == self.ix and (other.iy >> shift) == self.iy

    def disjoint(self, other: "DyadicCube") -> bool:
        return not (self.contains_cube(other) or other.contains_cube(self))

    def children(self) -> tuple["DyadicCube", ...]:
        lv, x2, y2 = self.level + 1, self.ix * 2, self.iy * 2
        return (
            DyadicCube(lv, x2, y2),
            DyadicCube(lv, x2 + 1, y2),
            DyadicCube(lv, x2, y2 + 1),
            DyadicCube(lv, x2 + 1, y2 + 1),
        )

    def ancestor(self, level: int) -> "DyadicCube":
        if level > self.level:
            raise ValueError("ancestor level must not exceed cube level")
        shift = self.level - level
        return DyadicCube(level, self.ix >> shift, self.iy >> shift)

    def __str__(self) -> str:
        return f"Q(level={self.level}, corner=({self.ix}, {self.iy})*2^-{self.level})"


@dataclass(frozen=True)
class ArbitraryCube:
    """Axis-aligned half-open square with exact dyadic corner and side, not grid-aligned."""

    x: DyadicScalar
    y: DyadicScalar
    side: DyadicScalar

    def __post_init__(self):
        if self.side.sign <= 0:
            raise ValueError("side must be positive")

    def area(self) -> Fraction:
        s = self.side.to_fraction()
        return s * s

    def intervals(self) -> tuple[tuple[DyadicScalar, DyadicScalar], tuple[DyadicScalar, DyadicScalar]]:
        return ((self.x, self.x + self.side), (self.y, self.y + self.side))


def _interval_overlap(a0: DyadicScalar, a1: DyadicScalar, b0: DyadicScalar, b1: DyadicScalar) -> bool:
    # half-open intervals [a0, a1) and [b0, b1)
    return a0 < b1 and b0 < a1


@dataclass(frozen=True)
class CantorCube:
    """One generation-k corner square, addressed by its corner-choice path.

    ``address`` is a length-k tuple over {SW, SE, NW, NE}; the empty address is
    the unit square.  Generation k has side l_k = 2**(-4**k) and level 4**k, and
    its 4**k cubes enumerate in recursive SW, SE, NW, NE order.
    """

    generation: int
    address: tuple[int, ...]

    def __post_init__(self):
        if len(self.address) != self.generation:
            raise ValueError("address length must equal the generation")
        if any(a not in (SW, SE, NW, NE) for a in self.address):
            raise ValueError("address codes must be in {0, 1, 2, 3}")

    @property
    def level(self) -> int:
        return generation_level(self.generation)

    def corner_ints(self) -> tuple[int, int]:
        """Lower-left corner as integers in units of l_k = 2**(-4**k).

        One axis at a time: stepping into generation j either keeps the corner
        (low choice) or shifts by l_{j-1} - l_j (high choice).
        """
        level = self.level
        cx = cy = 0
        for j, code in enumerate(self.address, start=1):
            off = (1 << (level - generation_level(j - 1))) - (1 << (level - generation_level(j)))
            if code & 1:  # east
                cx += off
            if code & 2:  # north
                cy += off
        return cx, cy

    def to_cube(self) -> DyadicCube:
        cx, cy = self.corner_ints()
        return DyadicCube(self.level, cx, cy)

    @property
    def corner(self) -> tuple[DyadicScalar, DyadicScalar]:
        cx, cy = self.corner_ints()
        return (DyadicScalar(cx, self.level), DyadicScalar(cy, self.level))

    @property
    def center(self) -> tuple[DyadicScalar, DyadicScalar]:
        cx, cy = self.corner_ints()
        return (
            DyadicScalar(2 * cx + 1, self.level + 1),
            DyadicScalar(2 * cy + 1, self.level + 1),
        )

    @property
    def side(self) -> DyadicScalar:
        return DyadicScalar.pow2(-self.level)

    def children(self) -> tuple["CantorCube", ...]:
        g = self.generation + 1
        return tuple(CantorCube(g, self.address + (code,)) for code in (SW, SE, NW, NE))

    def index(self) -> int:
        """1-based position in the canonical enumeration of its generation."""
        m = 0
        for code in self.address:
            m = m * 4 + code
        return m + 1

    def __str__(self) -> str:
        path = ".".join(CORNER_NAMES[a] for a in self.address) or "root"
        return f"C{self.generation}[{path}]"


def _cantor_generation_cached(k: int) -> tuple[CantorCube, ...]:
    cubes = [CantorCube(0, ())]
    for _ in range(k):
        cubes = [child for cube in cubes for child in cube.children()]
    return tuple(cubes)


_GENERATION_CACHE: dict[int, tuple[CantorCube, ...]] = {}


def cantor_generation(k: int, max_generation: int = DEFAULT_MAX_GENERATION) -> list[CantorCube]:
    """All 4**k generation-k cubes in canonical address order."""
    check_generation(k, max_generation)
    if k not in _GENERATION_CACHE:
        _GENERATION_CACHE[k] = _cantor_generation_cached(k)
    return list(_GENERATION_CACHE[k])


def corner_values_1d(k: int, max_generation: int = DEFAULT_MAX_GENERATION) -> list[int]:
    """Sorted 1D corner integers of generation k, in units of l_k."""
    check_generation(k, max_generation)
    level = generation_level(k)
    corners = [0]
    for j in range(1, k + 1):
        off = (1 << (level - generation_level(j - 1))) - (1 << (level - generation_level(j)))
        corners = [c for base in corners for c in (base, base + off)]
    return sorted(corners)


def generation_bracket(side: DyadicScalar, max_generation: int = DEFAULT_MAX_GENERATION) -> int:
    """The unique j with l_{j+1} < side <= l_j (so side = l_j maps to j, side = 1 to 0).

    Exact boundary sides belong to their own generation: a square of side
    exactly l_j can contain a full generation-j square, so it is bracketed
    with generation j.  The side sequence decays doubly exponentially, so the
    scan is short; sides at or below l_{max_generation + 1} are refused as a
    resource guard.
    """
    if side.sign <= 0 or side > D_ONE:
        raise ValueError(f"side must satisfy 0 < side <= 1, got {side}")
    for j in range(max_generation + 1):
        if side_length(j + 1) < side:
            return j
        if side_length(j + 1) == side:
            return j + 1
    raise GenerationLimitError(
        f"side {side} below resolution l_{max_generation + 1}"
    )


def count_generation_intersections(
    q: ArbitraryCube, j: int, max_generation: int = DEFAULT_MAX_GENERATION
) -> int:
    """Number of generation-j cubes meeting the half-open square ``q``, exactly.

    The generation is a product set I_j x I_j, so the count factors through the
    two axes.
    """
    check_generation(j, max_generation)
    level = generation_level(j)
    side_j = DyadicScalar.pow2(-level)
    corners = corner_values_1d(j, max_generation)
    (qx0, qx1), (qy0, qy1) = q.intervals()

    def axis_hits(q0: DyadicScalar, q1: DyadicScalar) -> int:
        hits = 0
        for c in corners:
            c0 = DyadicScalar(c, level)
            if _interval_overlap(q0, q1, c0, c0 + side_j):
                hits += 1
        return hits

    return axis_hits(qx0, qx1) * axis_hits(qy0, qy1)


def max_intersections(
    j: int,
    samples: int = 512,
    seed: int = 0,
    max_generation: int = DEFAULT_MAX_GENERATION,
) -> int:
    """Empirical maximum of generation-j cubes met by a square of side < l_j.

    Combines an exhaustive sweep of grid-aligned placements one level below
    l_j, a deterministic battery of corner-adjacent placements around every
    generation-j corner, and seeded random squares.  The certified observation
    (asserted downstream) is that the maximum never exceeds 4; the geometry of
    the construction in fact separates the cubes so strongly that single
    overlaps are the norm.
    """
    check_generation(j, max_generation)
    level = generation_level(j)
    best = 0

    # exhaustive grid-aligned placements, one level finer than l_j
    fine = level + 1
    step = DyadicScalar.pow2(-fine)
    n = 1 << fine
    if n <= 64:
        for ix in range(n):
            for iy in range(n):
                q = ArbitraryCube(DyadicScalar(ix, fine), DyadicScalar(iy, fine), step)
                best = max(best, count_generation_intersections(q, j, max_generation))
    else:
        # deep generations: sweep only the corner-adjacent band
        for c in corner_values_1d(j, max_generation):
            for d in (-2, -1, 0, 1):
                ix = max(0, min(n - 1, (c << (fine - level)) + d))
                for e in (-2, -1, 0, 1):
                    iy = max(0, min(n - 1, (c << (fine - level)) + e))
                    q = ArbitraryCube(DyadicScalar(ix, fine), DyadicScalar(iy, fine), step)
                    best = max(best, count_generation_intersections(q, j, max_generation))

    # corner-adjacent placements: squares of side just under l_j straddling corners
    side = DyadicScalar(3, level + 2)  # (3/4) l_j
    corners = corner_values_1d(j, max_generation)
    one_minus = D_ONE - side
    for cx in corners:
        for cy in corners:
            for dx in (-1, 0):
                for dy in (-1, 0):
                    x = DyadicScalar(4 * cx + dx + 1, level + 2)
                    y = DyadicScalar(4 * cy + dy + 1, level + 2)
                    if x.sign < 0 or y.sign < 0 or x > one_minus or y > one_minus:
                        continue
                    q = ArbitraryCube(x, y, side)
                    best = max(best, count_generation_intersections(q, j, max_generation))

    # seeded random squares with side < l_j
    rng = random.Random(seed)
    res = level + 8
    for _ in range(samples):
        s_int = rng.randrange(1, 1 << 8)  # side = s_int * 2**-(level+8) < l_j
        s = DyadicScalar(s_int, res)
        limit = (1 << res) - s_int
        x = DyadicScalar(rng.randrange(0, limit + 1), res)
        y = DyadicScalar(rng.randrange(0, limit + 1), res)
        q = ArbitraryCube(x, y, s)
        best = max(best, count_generation_intersections(q, j, max_generation))

    return best
