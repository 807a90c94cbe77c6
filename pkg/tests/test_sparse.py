from fractions import Fraction

import pytest

from cantoreuler.dyadic import DyadicCube, cantor_generation
from cantoreuler.measure import omega_cube
from cantoreuler.sparse import (
    SparseFamily,
    Witness,
    build_tower,
    chained_towers,
    divergence_profile,
    generation_towers,
    sparse_partial_sum,
    sparse_partial_sum_sq,
    tower_spec,
    verify_sparse,
)


class TestBuildTower:
    def test_generation1_anchor_and_levels(self):
        fam = build_tower(1, 1)
        assert len(fam) == 12
        assert [c.level for c in fam.cubes] == list(range(5, 17))
        assert all(c.ix == 0 and c.iy == 0 for c in fam.cubes)

    def test_generation0_levels(self):
        fam = build_tower(0, 1)
        assert [c.level for c in fam.cubes] == [2, 3, 4]

    def test_cardinality_formula(self):
        for k in (0, 1, 2):
            spec = tower_spec(k, 1)
            assert spec.cardinality == 3 * 4 ** k if k > 0 else spec.cardinality == 3

    def test_witness_ratios(self):
        fam = build_tower(1, 1)
        ratios = [w.ratio() for w in fam.witnesses]
        assert all(r == Fraction(3, 4) for r in ratios[:-1])
        assert ratios[-1] == 1

    def test_innermost_is_low_child(self):
        fam = build_tower(1, 1)
        low_child = cantor_generation(2)[0].to_cube()
        assert fam.cubes[-1] == low_child

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            build_tower(1, 5)
        with pytest.raises(ValueError):
            build_tower(1, 0)


class TestVerifySparse:
    def test_tower_passes(self):
        ok, cert = verify_sparse(build_tower(1, 2))
        assert ok
        assert set(cert.ratios) == {Fraction(3, 4), Fraction(1)}

    def test_packing_passes(self):
        cubes = [c.to_cube() for c in cantor_generation(1)]
        ok, cert = verify_sparse(SparseFamily.packing(cubes))
        assert ok
        assert all(r == 1 for r in cert.ratios)

    def test_duplicate_fails(self):
        q = DyadicCube(3, 1, 1)
        fam = SparseFamily((Witness(q), Witness(q)))
        ok, cert = verify_sparse(fam)
        assert not ok
        assert "duplicate" in cert.failure

    def test_nested_without_hole_fails(self):
        outer = DyadicCube(2, 0, 0)
        inner = DyadicCube(3, 0, 0)
        ok, cert = verify_sparse(SparseFamily((Witness(outer), Witness(inner))))
        assert not ok

    def test_small_ratio_fails(self):
        outer = DyadicCube(2, 0, 0)
        hole = DyadicCube(3, 0, 0)  # removes only a quarter: ratio 3/4, fine
        ok, _ = verify_sparse(SparseFamily((Witness(outer, hole), Witness(hole))))
        assert ok
        # a hole of the same size as the cube drives the ratio to 0
        with pytest.raises(ValueError):
            Witness(outer, DyadicCube(1, 0, 0))

    def test_union_of_generation_towers(self):
        fam = generation_towers(1)
        assert len(fam) == 4 * 12
        ok, _ = verify_sparse(fam)
        assert ok

    def test_chained_towers_cross_generation(self):
        fam = chained_towers(1)
        ok, cert = verify_sparse(fam)
        assert ok
        # chaining makes every non-terminal ratio exactly 3/4
        non_terminal = [r for r in cert.ratios if r != 1]
        assert all(r == Fraction(3, 4) for r in non_terminal)


class TestPartialSums:
    def test_single_tower_value(self, omega):
        fam = build_tower(1, 1)
        assert sparse_partial_sum_sq(omega, fam, 4) == Fraction(3, 64)
        v = sparse_partial_sum(omega, fam, 4)
        assert abs(v.to_float() ** 2 - 3 / 64) < 1e-14

    def test_empty_family(self, omega):
        assert sparse_partial_sum_sq(omega, SparseFamily(()), 4) == 0

    def test_all_generation1_towers(self, omega):
        fam = generation_towers(1)
        assert sparse_partial_sum_sq(omega, fam, 4) == Fraction(3, 16)

    def test_monotone_in_threshold(self, omega):
        fam = build_tower(1, 1)
        sums = [sparse_partial_sum_sq(omega, fam, n) for n in range(4, 18)]
        assert sums == sorted(sums, reverse=True)

    def test_monotone_under_union(self, omega):
        f1 = build_tower(1, 1)
        f2 = f1.union(build_tower(1, 2))
        assert sparse_partial_sum_sq(omega, f2, 4) >= sparse_partial_sum_sq(omega, f1, 4)


class TestDivergenceProfile:
    def test_contributions_constant(self):
        rows = divergence_profile(4)
        assert [r.contribution for r in rows] == [Fraction(3, 16)] * 4
        assert [r.cumulative for r in rows] == [
            Fraction(3, 16),
            Fraction(6, 16),
            Fraction(9, 16),
            Fraction(12, 16),
        ]

    def test_tower_masses_uniform(self):
        rows = divergence_profile(3)
        for r in rows:
            assert r.cube_mass == Fraction(1, 1 << (2 * (r.k + 1)))
            assert r.cubes_per_tower == 3 * 4 ** r.k
            assert r.tower_count == 4 ** r.k

    def test_every_tower_cube_mass_brute(self):
        # independently verify omega on every cube of every generation <= 2 tower
        for k in (1, 2):
            expected = Fraction(1, 1 << (2 * (k + 1)))
            for m in range(1, 4 ** k + 1):
                fam = build_tower(k, m)
                for cube in fam.cubes:
                    assert omega_cube(cube) == expected

    def test_depth_guard(self):
        with pytest.raises(ValueError):
            divergence_profile(6)

    def test_level_ranges_disjoint_across_generations(self):
        spans = [
            (tower_spec(k, 1).level_lo, tower_spec(k, 1).level_hi) for k in range(0, 4)
        ]
        for (lo1, hi1), (lo2, hi2) in zip(spans, spans[1:]):
            assert hi1 < lo2

    def test_same_generation_towers_disjoint(self):
        towers = [build_tower(1, m) for m in range(1, 5)]
        for i in range(4):
            for j in range(i + 1, 4):
                for a in towers[i].cubes[:3]:
                    for b in towers[j].cubes[:3]:
                        assert a.disjoint(b)
