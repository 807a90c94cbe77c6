"""Shared fixtures and independent oracles for the test suite.

Oracles deliberately avoid the engine's own code paths: measure values come
from enumerating atoms, norm maxima from breadth-first sweeps over all
mass-carrying cubes, and disk-overlap areas from polygonal approximation.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from cantoreuler.dyadic import DyadicCube, cantor_generation
from cantoreuler.measure import OmegaMeasure


def brute_omega_cube(q: DyadicCube, k: int) -> Fraction:
    """Atomic mass of a cube by raw center counting at generation k."""
    count = 0
    for c in cantor_generation(k):
        x, y = c.center
        if q.contains_point(x, y):
            count += 1
    return Fraction(count, 1 << (2 * k))


def brute_per_level_max(max_level: int) -> list[tuple[int, Fraction, DyadicCube]]:
    """Per-level maximal limit-measure mass by exhaustive sweep over alive cubes."""
    mu = OmegaMeasure()
    out = []
    frontier = [DyadicCube(0, 0, 0)]
    for level in range(1, max_level + 1):
        nxt = []
        for cube in frontier:
            for ch in cube.children():
                if mu.cube_mass(ch) > 0:
                    nxt.append(ch)
        frontier = nxt
        best = max(frontier, key=lambda c: (mu.cube_mass(c), -c.ix, -c.iy))
        out.append((level, mu.cube_mass(best), best))
    return out


def shapely_patch_mass(params, cube: DyadicCube) -> float:
    """|vorticity| mass of a cube via polygonal circle approximation (float oracle)."""
    import math

    from shapely.geometry import Point, box

    from cantoreuler.vortex import locate_patch

    x0, y0 = cube.corner
    sq = locate_patch(params, x0, y0)
    if sq is None:
        return 0.0
    cx, cy = sq.center
    cxf, cyf = float(cx.to_fraction()), float(cy.to_fraction())
    s = 2.0 ** -cube.level
    bx = box(float(x0.to_fraction()), float(y0.to_fraction()),
             float(x0.to_fraction()) + s, float(y0.to_fraction()) + s)
    core = Point(cxf, cyf).buffer(float(params.delta), quad_segs=512)
    inner = Point(cxf, cyf).buffer(math.sqrt(float(params.inner_r2)), quad_segs=512)
    outer = Point(cxf, cyf).buffer(math.sqrt(float(params.r2)), quad_segs=512)
    dens_plus = float(params.q_plus) / math.pi
    dens_minus = abs(float(params.q_minus)) / math.pi
    ann_area = outer.intersection(bx).area - inner.intersection(bx).area
    return dens_plus * core.intersection(bx).area + dens_minus * max(ann_area, 0.0)


@pytest.fixture(scope="session")
def omega():
    return OmegaMeasure()


@pytest.fixture(scope="session")
def verify_all_runs(tmp_path_factory):
    """Two independent CLI battery runs: (list of report bytes, list of exit codes)."""
    import subprocess
    import sys

    base = tmp_path_factory.mktemp("verifyall")
    outs, codes = [], []
    for i in (1, 2):
        out = base / f"r{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "cantoreuler.cli", "verify-all", "--output", str(out)],
            capture_output=True,
            text=True,
            cwd=base,
        )
        outs.append(out.read_bytes())
        codes.append(proc.returncode)
    return outs, codes
