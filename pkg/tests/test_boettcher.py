"""Green's/Boettcher data, the comb parameter a, and external rays.

The degenerate case lam = 2 supplies closed forms used as oracles:
the uniformizer is w + 1/w, so with s(z) the branch of sqrt(z^2-4)
asymptotic to z,

    G(z) = (z - s)/2,   g = log|(z + s)/2|,   L = -1/s,
    Lp = z / s^3,       density(h) = 2 pi e^{2 pi h}.
"""

import cmath
import math

import numpy as np
import pytest

from greenjulia.angles import DirectionAngle
from greenjulia.boettcher import (angle_double_fold, compute_a,
                                  default_heights, log_deriv_jet,
                                  ray_csv_rows, ray_integrand, trace_ray)
from greenjulia.dynamics import derive_params, greens_value, julia_cover
from greenjulia.errors import (DyadicAngleError, NonEscapingError,
                               ScheduleTooCoarse)
from greenjulia.goodset import membership


def _sqrt_branch(z):
    # sqrt(z^2 - 4) asymptotic to z at infinity
    return z * cmath.sqrt(1.0 - 4.0 / (z * z))


def test_compute_a_values():
    assert compute_a(derive_params(2.0)) == 0.0
    a6 = derive_params(6.0).a
    assert abs(a6 - 0.5408) < 1e-4


def test_compute_a_monotone():
    values = [derive_params(lam).a for lam in (3.0, 4.0, 5.0, 6.0)]
    assert all(x < y for x, y in zip(values, values[1:]))


def test_compute_a_against_comb_limit():
    # independent route: xi cosh(pi h(-2^m)) equals the critical value, and
    # h(-2^m)/2^m converges to a from below
    from greenjulia.poincare import comb_height
    p = derive_params(6.0)
    approx = comb_height(p, 2 ** 12).height / 2 ** 12
    assert abs(approx - p.a) < 1e-3


def test_log_deriv_chebyshev_oracle():
    p = derive_params(2.0)
    rng = np.random.default_rng(3)
    pts = [3.0 + 0j, 2.5 + 1.0j, -4.0 + 0.5j, 1.0 + 2.0j]
    pts += [complex(rng.uniform(-5, 5), rng.uniform(0.5, 4)) for _ in range(16)]
    for z in pts:
        s = _sqrt_branch(z)
        d = log_deriv_jet(p, z)
        assert abs(d.g - math.log(abs((z + s) / 2))) < 1e-9
        assert abs(d.L - (-1.0 / s)) < 1e-8
        assert abs(d.Lp - z / s ** 3) < 1e-8


def test_log_deriv_doubling_identity():
    p = derive_params(6.0)
    z = 4.0 + 0j
    d = log_deriv_jet(p, z)
    dP = log_deriv_jet(p, z * z - 6.0)
    assert abs(dP.L * (2 * z) - 2 * d.L) < 1e-10


def test_boettcher_identities_random():
    rng = np.random.default_rng(11)
    for lam in (3.5, 6.0, 10.0):
        p = derive_params(lam)
        count = 0
        while count < 70:
            z = complex(rng.uniform(-2 * p.xi, 2 * p.xi),
                        rng.uniform(0.1, 2 * p.xi))
            try:
                d = log_deriv_jet(p, z)
            except NonEscapingError:
                continue
            if d.g <= 0:
                continue
            count += 1
            w = z * z - lam
            dP = log_deriv_jet(p, w)
            assert abs(dP.g - 2.0 * d.g) < 1e-9
            assert abs(dP.L * (2 * z) - 2.0 * d.L) < 1e-9 * max(1.0, abs(d.L))


def test_log_deriv_real_axis():
    # on (xi, inf): G real positive decreasing, so L is real negative
    p = derive_params(6.0)
    for x in (3.2, 4.0, 7.5, 20.0):
        d = log_deriv_jet(p, complex(x))
        assert abs(d.L.imag) < 1e-12
        assert d.L.real < 0


def test_log_deriv_second_ratio_vs_finite_difference():
    p = derive_params(6.0)
    z = 2.0 + 1.5j
    eps = 1e-6
    d = log_deriv_jet(p, z)
    dp = log_deriv_jet(p, z + eps)
    dm = log_deriv_jet(p, z - eps)
    assert abs((dp.L - dm.L) / (2 * eps) - d.Lp) < 1e-4 * max(1.0, abs(d.Lp))


def test_log_deriv_rejects_julia_points():
    p = derive_params(6.0)
    with pytest.raises(NonEscapingError):
        log_deriv_jet(p, complex(p.xi))


def test_ray_heights_reproduced_by_greens_series():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(2, 3), default_heights(p, 10))
    assert len(ray.samples) == 161
    hs = [s.h for s in ray.samples]
    assert all(b < a for a, b in zip(hs, hs[1:]))
    for s in ray.samples:
        assert abs(greens_value(p, s.z) / math.pi - s.h) < 1e-9


def test_ray_conjugate_symmetry():
    # the ray at 1 - psi is the reflection z -> -conj(z) of the ray at psi
    p = derive_params(6.0)
    hs = default_heights(p, 4)
    r23 = trace_ray(p, DirectionAngle(2, 3), hs)
    r13 = trace_ray(p, DirectionAngle(1, 3), hs)
    for a, b in zip(r13.samples, r23.samples):
        assert abs(a.z - (-b.z.conjugate())) < 1e-10


def test_ray_pullback_matches_folded_ray():
    # P^n moves a sample to the n-fold shifted ray at height 2^n h, up to
    # the sign carried by the n-th bit
    p = derive_params(6.0)
    ang = DirectionAngle(2, 3)
    for n in (1, 2, 3):
        top = [p.a * 2.0 ** (-j / 8) for j in range(9)]
        deep = [h / 2 ** n for h in top]
        folded = trace_ray(p, ang.shift_n(n), top)
        direct = trace_ray(p, ang, deep)
        sign = -1.0 if ang.bit(n) else 1.0
        for wf, zd in zip(folded.samples, direct.samples):
            img = zd.z
            for _ in range(n):
                img = img * img - p.lam
            assert abs(img - sign * wf.z) < 1e-6


def test_ray_dyadic_tip():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(1, 2), default_heights(p, 6))
    assert ray.termination == "tip"
    assert abs(ray.tip.point) < 1e-6
    assert abs(ray.tip.height - p.a / 2) < 1e-8
    assert all(s.h > p.a / 2 for s in ray.samples)


def test_ray_dyadic_deeper_tip():
    # psi = 3/4: slit at depth 2, tip over a preimage of 0
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(3, 4), default_heights(p, 6))
    assert ray.termination == "tip"
    assert abs(ray.tip.height - p.a / 4) < 1e-12
    assert abs(ray.tip.point * ray.tip.point - p.lam) < 1e-6  # P(tip) = 0


def test_ray_small_angle_stays_near_real_axis():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(1, 2049), default_heights(p, 2))
    for s in ray.samples:
        assert s.z.real > p.xi
        assert abs(s.z.imag) < 0.05 * abs(s.z.real)


def test_ray_endpoint_lands_in_julia_cover():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(2, 3), default_heights(p, 10))
    z_end = ray.samples[-1].z
    cover = julia_cover(p, 10)
    assert abs(z_end.imag) < 0.05
    assert cover.contains(z_end.real, slack=0.05)


def test_schedule_too_coarse():
    p = derive_params(6.0)
    with pytest.raises(ScheduleTooCoarse):
        trace_ray(p, DirectionAngle(2, 3), [p.a, p.a / 8], arc_bound=1e-4)


def test_angle_double_fold():
    folded, flipped = angle_double_fold(DirectionAngle(2, 3))
    assert (folded.numerator, folded.denominator) == (1, 3)
    assert flipped
    folded, flipped = angle_double_fold(DirectionAngle(5, 12))
    assert (folded.numerator, folded.denominator) == (5, 6)
    assert not flipped
    with pytest.raises(DyadicAngleError):
        angle_double_fold(DirectionAngle(1, 2))


def test_fold_preserves_membership():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 10_000:
        bits = []
        run = 0
        bit = rng.integers(0, 2)
        for _ in range(24):
            if run == 2:
                bit = 1 - bit
                run = 0
            elif rng.random() < 0.5:
                bit = 1 - bit
                run = 0
            bits.append(int(bit))
            run += 1
        num = int("".join(map(str, bits)), 2)
        den = 2 ** 24 - 1  # purely periodic angle with the given word
        if num == 0 or math.gcd(num, den) > 1:
            continue
        ang = DirectionAngle(num, den)
        if ang.is_dyadic or not membership(ang, 2):
            continue
        folded, _ = angle_double_fold(ang)
        assert membership(folded, 2)
        checked += 1


def test_density_chebyshev_oracle():
    p = derive_params(2.0)
    for pq in ((2, 3), (3, 7)):
        ray = trace_ray(p, DirectionAngle(*pq),
                        [0.9 * 2.0 ** (-j / 8) for j in range(25)])
        for s in ray.samples:
            assert abs(ray_integrand(p, s)
                       - 2.0 * math.pi * math.exp(2 * math.pi * s.h)) < 1e-8


def test_density_mirror_invariance():
    p = derive_params(6.0)
    hs = default_heights(p, 3)
    r23 = trace_ray(p, DirectionAngle(2, 3), hs)
    r13 = trace_ray(p, DirectionAngle(1, 3), hs)
    for a, b in zip(r23.samples, r13.samples):
        assert abs(ray_integrand(p, a) - ray_integrand(p, b)) < 1e-10 * max(
            1.0, ray_integrand(p, a))


def test_density_finite_down_the_ray():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(2, 3), default_heights(p, 12))
    vals = [ray_integrand(p, s) for s in ray.samples]
    assert all(math.isfinite(v) and v > 0 for v in vals)
    # continuity proxy: neighbouring samples stay within a mild factor
    for a, b in zip(vals, vals[1:]):
        assert 0.2 < b / a < 5.0


def test_ray_squeezes_past_slit_tip():
    # angles hugging 1/2: below height a/2 the ray bends around the slit
    # tip near z = 0, where |L| collapses and the density spikes
    p = derive_params(6.0)
    for pq in ((1023, 2047), (511, 1023)):
        ray = trace_ray(p, DirectionAngle(*pq), default_heights(p, 8))
        for s in ray.samples:
            assert abs(greens_value(p, s.z) / math.pi - s.h) < 1e-9
        peak = max(ray_integrand(p, s) for s in ray.samples)
        assert peak > 1e3  # genuinely near-singular, not smoothed away


def test_ray_heights_across_lambda_extremes():
    # near-degenerate and strongly expanding parameters
    for lam in (2.1, 100.0):
        p = derive_params(lam)
        ray = trace_ray(p, DirectionAngle(2, 3), default_heights(p, 3))
        for s in ray.samples:
            assert abs(greens_value(p, s.z) / math.pi - s.h) < 1e-9


def test_density_singular_near_critical_point():
    # |L| collapses at (pre)critical points, reachable only on dyadic rays
    from greenjulia.boettcher import LogDerivData, RaySample
    from greenjulia.errors import SingularSampleError
    p = derive_params(6.0)
    fake = RaySample(h=0.1, z=1e-9 + 0j,
                     data=LogDerivData(g=0.1, L=1e-15 + 0j, Lp=1.0 + 0j, depth=5))
    with pytest.raises(SingularSampleError):
        ray_integrand(p, fake)


def test_ray_csv_format():
    p = derive_params(6.0)
    ray = trace_ray(p, DirectionAngle(2, 3), default_heights(p, 2))
    rows = list(ray_csv_rows(p, ray))
    assert rows[0] == ("h", "re_z", "im_z", "g", "re_L", "im_L", "density")
    assert len(rows) == len(ray.samples) + 1
    for row in rows[1:]:
        assert len(row) == 7
        # shortest round-trip formatting: parse -> repr is the identity
        assert all(repr(float(cell)) == cell for cell in row)
