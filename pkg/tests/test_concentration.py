import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantoreuler.concentration import (
    dimension_zero_certificate,
    energy_fraction,
    energy_in_cube,
    reduced_defect,
    vortex_sparse_lower_bound,
    weak_pairing_bound,
)
from cantoreuler.dyadic import DyadicCube
from cantoreuler.measure import omega_k_cube
from cantoreuler.sparse import verify_sparse
from cantoreuler.vortex import ENERGY_LIMIT, l2_closed_form


def cubes_up_to(level):
    return st.integers(1, level).flatmap(
        lambda lv: st.tuples(
            st.just(lv), st.integers(0, (1 << lv) - 1), st.integers(0, (1 << lv) - 1)
        )
    ).map(lambda t: DyadicCube(*t))


class TestEnergyInCube:
    def test_unit_square_total(self):
        for k in (1, 2):
            e = energy_in_cube(k, DyadicCube(0, 0, 0))
            assert e.patch_count == 1 << (2 * k)
            assert e.energy == pytest.approx(l2_closed_form(k).value(), rel=1e-12)

    def test_generation1_square_at_k2(self):
        e = energy_in_cube(2, DyadicCube(4, 0, 0))
        assert e.patch_count == 4
        assert e.fraction == Fraction(1, 4)

    def test_gap_cube(self):
        e = energy_in_cube(2, DyadicCube(4, 7, 7))
        assert e.patch_count == 0 and e.energy == 0.0

    def test_level_guard(self):
        with pytest.raises(ValueError):
            energy_in_cube(1, DyadicCube(5, 0, 0))


class TestEnergyFraction:
    @settings(max_examples=35, deadline=None)
    @given(cubes_up_to(4))
    def test_identity_with_atomic_mass_k1_to_k3(self, q):
        for k in (1, 2, 3):
            assert energy_fraction(k, q) == omega_k_cube(k, q)

    def test_examples(self):
        assert energy_fraction(1, DyadicCube(0, 0, 0)) == 1
        assert energy_fraction(3, DyadicCube(4, 0, 0)) == Fraction(1, 4)
        assert energy_fraction(2, DyadicCube(2, 2, 0)) == 0

    def test_child_additivity(self):
        q = DyadicCube(2, 0, 0)
        total = sum((energy_fraction(2, c) for c in q.children()), Fraction(0))
        assert total == energy_fraction(2, q)


class TestReducedDefect:
    def test_zero_cube(self):
        rd = reduced_defect(DyadicCube(4, 7, 7), 3)
        assert rd.stabilized_fraction == 0
        assert rd.omega_value == 0
        assert all(e == 0.0 for _, e in rd.per_k_energy)

    def test_generation1_square(self):
        rd = reduced_defect(DyadicCube(4, 0, 0), 3)
        assert rd.stabilized_fraction == Fraction(1, 4)
        assert rd.omega_value == Fraction(1, 4)
        assert all(f == Fraction(1, 4) for _, f in rd.per_k_fraction)

    def test_unit_square_energies_approach_limit(self):
        rd = reduced_defect(DyadicCube(0, 0, 0), 4)
        assert rd.stabilized_fraction == 1
        energies = [e for _, e in rd.per_k_energy]
        assert abs(energies[-1] - ENERGY_LIMIT) < abs(energies[0] - ENERGY_LIMIT)

    def test_children_sum_to_parent(self):
        q = DyadicCube(3, 0, 0)
        k = 3
        parent = energy_in_cube(k, q)
        total = sum(energy_in_cube(k, c).fraction for c in q.children())
        assert total == parent.fraction


class TestWeakPairing:
    def test_exact_support_areas(self):
        wb1 = weak_pairing_bound(1)
        assert wb1.support_area == Fraction(4, 1 << 8)
        wb2 = weak_pairing_bound(2)
        assert wb2.support_area == Fraction(16, 1 << 32)

    def test_log2_values(self):
        # log2 = k - 4^k + log2(||u_k||)
        expected = {
            1: 1 - 4 + math.log2(l2_closed_form(1).value()) / 2,
            2: 2 - 16 + math.log2(l2_closed_form(2).value()) / 2,
            3: 3 - 64 + math.log2(l2_closed_form(3).value()) / 2,
            4: 4 - 256 + math.log2(l2_closed_form(4).value()) / 2,
        }
        for k, e in expected.items():
            assert weak_pairing_bound(k).log2_value == pytest.approx(e, abs=1e-9)

    def test_doubly_exponential_decay(self):
        vals = [weak_pairing_bound(k).log2_value for k in range(1, 6)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        # decay accelerates: successive differences grow by ~4x
        diffs = [a - b for a, b in zip(vals, vals[1:])]
        assert all(d2 > 2 * d1 for d1, d2 in zip(diffs, diffs[1:]))


class TestVortexSparse:
    def test_values_and_growth(self):
        v1 = vortex_sparse_lower_bound(1)
        v2 = vortex_sparse_lower_bound(2)
        assert v1.generation_used == 2 and v2.generation_used == 4
        assert v1.log2_value == pytest.approx(2 * 16 + 5 - 2 - math.log2(math.pi)
                                              + 0.5 * math.log2(16 / 15), abs=1e-6)
        assert v2.log2_value == pytest.approx(2 * 256 + 5 - 4 - math.log2(math.pi)
                                              + 0.5 * math.log2(16 / 15), abs=1e-6)
        assert v2.log2_value > v1.log2_value

    def test_value_matches_materialized_towers(self, omega):
        # rebuild the N=1 sum from actual tower cubes: Omega+^2 * sum of areas^2
        v1 = vortex_sparse_lower_bound(1)
        fam = v1.family()
        from cantoreuler.vortex import patch_params

        q_plus = patch_params(2).q_plus
        total = sum((c.area() ** 2 for c in fam.cubes), Fraction(0))
        from cantoreuler.extscalar import log2_fraction

        log2_direct = (2 * math.log2(float(q_plus)) + log2_fraction(total)) / 2 - math.log2(math.pi)
        assert v1.log2_value == pytest.approx(log2_direct, abs=1e-9)

    def test_family_is_sparse(self):
        fam = vortex_sparse_lower_bound(1).family()
        ok, cert = verify_sparse(fam)
        assert ok
        assert set(cert.ratios) == {Fraction(3, 4), Fraction(1)}

    def test_range_guard(self):
        with pytest.raises(ValueError):
            vortex_sparse_lower_bound(0)
        with pytest.raises(ValueError):
            vortex_sparse_lower_bound(6)


class TestDimensionCertificate:
    @pytest.mark.parametrize(
        "gamma,delta,m",
        [
            (Fraction(1, 10), Fraction(1, 100), 4),
            (Fraction(2), Fraction(1, 100), 2),
            (Fraction(1), Fraction(1, 2), 1),
        ],
    )
    def test_examples(self, gamma, delta, m):
        cert = dimension_zero_certificate(gamma, delta)
        assert cert.m == m
        assert all(cert.checks)

    def test_minimality(self):
        cert = dimension_zero_certificate(Fraction(1, 10), Fraction(1, 100))
        from cantoreuler.concentration import _cover_condition, _side_condition

        m = cert.m
        assert _cover_condition(m, cert.gamma, cert.delta)
        assert _side_condition(m, cert.delta)
        assert not (
            _cover_condition(m - 1, cert.gamma, cert.delta)
            and _side_condition(m - 1, cert.delta)
        )

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            dimension_zero_certificate(Fraction(0), Fraction(1, 2))
        with pytest.raises(ValueError):
            dimension_zero_certificate(Fraction(1), Fraction(0))
