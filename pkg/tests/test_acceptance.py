"""Acceptance battery: one test per criterion, printing a PASS/FAIL line each.

Every tolerance below is pinned here, not computed.  Criterion 8's decay
targets are kept exactly as shipped even though the exact values computed
from the support areas 4**k * l_k**2 do not attain them (the report carries
both numbers); that criterion is expected to fail and is not weakened.
"""

import json
import math
import random
import time
from fractions import Fraction

from cantoreuler.battery import (
    VORTEX_SPARSE_LOG2_TARGETS,
    WEAK_PAIRING_LOG2_TARGETS,
)
from cantoreuler.concentration import (
    dimension_zero_certificate,
    energy_fraction,
    vortex_sparse_lower_bound,
    weak_pairing_bound,
)
from cantoreuler.dyadic import CantorCube, DyadicCube, cantor_generation, generation_level
from cantoreuler.measure import (
    MorreyConfig,
    OmegaMeasure,
    generation_atoms,
    morrey_log_norm,
    omega_cube,
    omega_k_cube,
    stabilization_generation,
)
from cantoreuler.sparse import build_tower, divergence_profile, verify_sparse
from cantoreuler.vortex import (
    ENERGY_LIMIT,
    RadialSpeed,
    dm_scaling_report,
    l2_closed_form,
    l2_quadrature,
    pairing_against_rotation_field,
    patch_params,
)


def _verdict(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:02d} {name}: {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed{suffix}"


def _sample(rng: random.Random, max_level: int):
    level = rng.randint(1, max_level)
    if rng.random() < 0.5:
        return DyadicCube(level, rng.randrange(1 << level), rng.randrange(1 << level))
    g = stabilization_generation(level)
    addr = tuple(rng.randrange(4) for _ in range(g))
    cx, cy = CantorCube(g, addr).corner_ints()
    shift = generation_level(g) - level
    return DyadicCube(level, cx >> shift, cy >> shift)


def test_criterion_01_cantor_measure_exactness():
    t0 = time.monotonic()
    ok = True
    for k in range(1, 5):
        expected = Fraction(1, 1 << (2 * k))
        ok = ok and all(omega_cube(c.to_cube()) == expected for c in cantor_generation(k))
    rng = random.Random(1)
    for _ in range(1000):
        q = _sample(rng, 16)
        if omega_cube(q) != sum((omega_cube(c) for c in q.children()), Fraction(0)):
            ok = False
            break
    elapsed = time.monotonic() - t0
    _verdict(1, "cantor/measure exactness", ok and elapsed < 10.0, f"{elapsed:.1f}s")


def test_criterion_02_morrey_membership():
    t0 = time.monotonic()
    rep = morrey_log_norm(OmegaMeasure(), MorreyConfig(alpha=Fraction(1), log_base="2", max_level=1024))
    elapsed = time.monotonic() - t0
    ok = (
        rep.norm_exact == Fraction(9, 4)
        and rep.argmax_level == 4
        and all(e.value_exact <= Fraction(9, 4) for e in rep.per_level)
        and len(rep.per_level) == 1024
        and elapsed < 30.0
    )
    _verdict(2, "limit measure in the log-1 class (norm 9/4 at level 4)", ok, f"{elapsed:.1f}s")


def test_criterion_03_dirac_non_membership():
    rep = morrey_log_norm(generation_atoms(1), MorreyConfig(alpha=Fraction(1), max_level=64))
    vals = [e.value_exact for e in rep.per_level]
    growing = all(vals[i] < vals[i + 1] for i in range(4, 63))
    linear = all(vals[nu - 1] == Fraction(1 + 2 * nu, 4) for nu in range(5, 65))
    _verdict(3, "atomic approximations leave the class (growth beyond level 4)", growing and linear)


def test_criterion_04_sparse_divergence():
    rows = divergence_profile(4)
    contributions_ok = [r.contribution for r in rows] == [Fraction(3, 16)] * 4
    cumulative_ok = [r.cumulative for r in rows] == [
        Fraction(3, 16),
        Fraction(6, 16),
        Fraction(9, 16),
        Fraction(12, 16),
    ]
    towers_ok = True
    for k in range(1, 5):
        for m in range(1, 4 ** k + 1):
            ok, cert = verify_sparse(build_tower(k, m))
            if not ok or any(r != Fraction(3, 4) for r in cert.ratios[:-1]) or cert.ratios[-1] != 1:
                towers_ok = False
    _verdict(4, "tower square-sums: 3/16 per generation, all towers sparse",
             contributions_ok and cumulative_ok and towers_ok)


def test_criterion_05_patch_exactness():
    ok = True
    for k in range(1, 5):
        p = patch_params(k, Fraction(2))
        sp = RadialSpeed(p)
        circ = p.q_plus * p.core_r2 + p.q_minus * (p.r2 - p.delta)
        l1 = 2 * p.q_plus * p.core_r2
        outer = (p.core_r2 * p.q_plus + p.q_minus * (p.r2 - p.delta)) / 2
        cont = sp.r_speed_pi(p.core_r2) == p.core_r2 * p.q_plus / 2 and sp.r_speed_pi(
            p.inner_r2
        ) == p.core_r2 * p.q_plus / 2
        ok = ok and circ == 0 and l1 == Fraction(1, 1 << (2 * k)) and outer == 0 and cont
    _verdict(5, "patch identities: zero circulation, L1 mass, outer zero, continuity", ok)


def test_criterion_06_energy_oracle_agreement():
    ok = True
    for k in (1, 2):
        closed = l2_closed_form(k).value()
        quad = l2_quadrature(k)
        if abs(closed - quad) / closed > 1e-6:
            ok = False
    gaps = []
    for k in range(1, 5):
        v = l2_closed_form(k).value()
        if not (0.02 <= v <= 1.0):
            ok = False
        gaps.append(abs(v - ENERGY_LIMIT))
    ok = ok and all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    _verdict(6, "energy: quadrature agreement, window [1/50, 1], monotone limit", ok)


def test_criterion_07_energy_fraction_identity():
    rng = random.Random(7)
    ok = True
    for k in (1, 2, 3):
        for _ in range(100):
            q = _sample(rng, generation_level(k))
            if energy_fraction(k, q) != omega_k_cube(k, q):
                ok = False
    # stabilized fractions agree with the limit measure
    for _ in range(50):
        q = _sample(rng, 4)
        k0 = stabilization_generation(q.level)
        if energy_fraction(max(k0, 1), q) != omega_cube(q):
            ok = False
    _verdict(7, "energy fraction = atomic mass, stabilizes to the limit measure", ok)


def test_criterion_08_weak_convergence_profile():
    values = {k: weak_pairing_bound(k) for k in range(1, 5)}
    detail = ", ".join(f"k={k}: {values[k].log2_value:.2f} vs {WEAK_PAIRING_LOG2_TARGETS[k]}" for k in values)
    thresholds_ok = all(values[k].log2_value <= WEAK_PAIRING_LOG2_TARGETS[k] for k in values)
    within5_ok = all(abs(values[k].log2_value - WEAK_PAIRING_LOG2_TARGETS[k]) <= 5 for k in values)
    pairing, sup_phi = pairing_against_rotation_field(1)
    pairing_ok = pairing <= values[1].value.to_float() * sup_phi
    _verdict(
        8,
        "weak-convergence decay targets",
        thresholds_ok and within5_ok and pairing_ok,
        detail,
    )


def test_criterion_09_vortex_sparse_blowup():
    v1 = vortex_sparse_lower_bound(1)
    v2 = vortex_sparse_lower_bound(2)
    ok = (
        v1.log2_value >= VORTEX_SPARSE_LOG2_TARGETS[1]
        and v2.log2_value >= VORTEX_SPARSE_LOG2_TARGETS[2]
        and v2.log2_value > v1.log2_value
    )
    _verdict(
        9,
        "eddy-family tower square-sum blow-up",
        ok,
        f"log2: {v1.log2_value:.2f}, {v2.log2_value:.2f}",
    )


def test_criterion_10_dimension_zero_certificate():
    a = dimension_zero_certificate(Fraction(1, 10), Fraction(1, 100))
    b = dimension_zero_certificate(Fraction(2), Fraction(1, 100))
    ok = a.m == 4 and b.m == 2 and all(a.checks) and all(b.checks)
    _verdict(10, "zero-dimension cover certificates", ok)


def test_criterion_11_scaling_baseline_contrast():
    eps_list = [Fraction(1, 16), Fraction(1, 256), Fraction(1, 4096)]
    half = [dm_scaling_report(e, Fraction(1, 2)).norm_value.to_float() for e in eps_list]
    flat_ok = max(half) / min(half) <= 2.0
    one = [dm_scaling_report(e, Fraction(1)).norm_value.to_float() for e in eps_list]
    coeffs = [v / math.sqrt(math.log2(1 / float(e))) for v, e in zip(one, eps_list)]
    mid = sorted(coeffs)[1]
    fit_ok = all(abs(c - mid) <= 0.25 * mid for c in coeffs)
    _verdict(11, "single-sign scaling stays in the half class only", flat_ok and fit_ok)


def test_criterion_12_determinism(verify_all_runs):
    outs, codes = verify_all_runs
    ok = outs[0] == outs[1] and codes[0] == codes[1]
    doc = json.loads(outs[0])
    ok = ok and doc["schema"] == "cantoreuler-report-v1"
    _verdict(12, "byte-identical battery reports", ok)
