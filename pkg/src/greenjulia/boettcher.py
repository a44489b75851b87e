"""Green's/Boettcher data with derivatives, and external-ray tracing.

Everything is expressed through the branch-free pair (g, L):

    g(z)  = -log|G(z)|           Green's function (dynamics.greens_value)
    L(z)  = G'(z) / G(z)         logarithmic derivative, single valued
    Lp(z) = L'(z)

obtained as limits of 2^{-n} (P^n)'(z)/P^n(z) via the same telescoping
series as g.  The doubling identity L(P(z)) P'(z) = 2 L(z) and the ratios
|G'| = e^{-g} |L|, G''/G = Lp + L^2 turn every curvature quantity of the
inverse map T = G^{-1} into (g, L, Lp) data; in particular the radial
variation density with respect to the Green's height h is

    pi e^{pi h} |Lp + L^2| / |L|^3.

Rays are continued downwards in h Douady-Hubbard style: at height h pick
the smallest depth n with e^{2^n pi h} above the squared escape radius,
then Newton-solve  log B(P^n(z)) = 2^n pi h + i pi (2^n psi mod 2)  where
B = 1/G is normalized to the identity at infinity and log B is summed by
the same series (exact, so the height contract holds at every depth).
The phase is reduced exactly with integer arithmetic, and the residual's
imaginary part is wrapped to (-pi, pi] so no global branch is ever
tracked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .angles import DirectionAngle
from .dynamics import PolyParams, greens_value, preimages
from .errors import (DomainError, DyadicAngleError, NewtonDivergence,
                     NonEscapingError, ScheduleTooCoarse, SingularSampleError)

_MAX_DEPTH = 64
_MIN_NEWTON_MODULUS = 100.0


@dataclass(frozen=True)
class LogDerivData:
    """Green's value with the log-derivative pair at one point."""

    g: float
    L: complex
    Lp: complex
    depth: int

    def second_ratio(self) -> complex:
        """G''/G = Lp + L^2."""
        return self.Lp + self.L * self.L


@dataclass(frozen=True)
class RaySample:
    h: float
    z: complex
    data: LogDerivData


@dataclass(frozen=True)
class TipInfo:
    point: complex
    height: float


@dataclass(frozen=True)
class ExternalRay:
    """Trace of gamma_psi: samples at decreasing Green's height h."""

    angle: DirectionAngle
    samples: tuple
    termination: str          # "hmin" or "tip"
    tip: TipInfo | None = None


def compute_a(p: PolyParams) -> float:
    """Comb height a = g(lam) / pi; zero exactly at lam = 2."""
    return greens_value(p, complex(p.lam)) / math.pi


def log_deriv_jet(p: PolyParams, z: complex, tol: float = 1e-12) -> LogDerivData:
    """(g, L, Lp) at an escaping point, by term-wise differentiated series.

    L = -(1/z + sum 2^{-(k+1)} 2 lam (P^k)'(z) / (z_k z_{k+1})) since the
    series is the log-derivative of B = 1/G.  Each term is formed from the
    forward jet, so no large-cancellation differences ever appear.
    """
    lam, xi = p.lam, p.xi
    R = p.escape_radius()
    snap = 1e-9 * xi
    v = complex(z)
    if abs(v) < 1e-150:
        raise SingularSampleError("log-derivative data undefined at the critical point")
    g = math.log(abs(v))
    s = 1.0 / v
    sp = -1.0 / (v * v)
    d1 = 1.0 + 0.0j
    d2 = 0.0 + 0.0j
    half = 0.5
    depth = 0
    for k in range(_MAX_DEPTH):
        if abs(v - xi) <= snap or abs(v + xi) <= snap:
            raise NonEscapingError(f"{z} is on (or numerically on) E0")
        w = v * v - lam
        if abs(w) < 1e-150 or abs(v) < 1e-150:
            raise SingularSampleError(f"orbit of {z} hits a precritical point at depth {k}")
        g += half * math.log(abs(1.0 - lam / (v * v)))
        vw = v * w
        term_s = half * 2.0 * lam * d1 / vw
        term_sp = half * 2.0 * lam * (d2 / vw - d1 * d1 * (w + 2.0 * v * v) / (vw * vw))
        s += term_s
        sp += term_sp
        depth = k + 1
        if abs(v) > R and abs(term_s) <= tol * (1.0 + abs(s)) \
                and abs(term_sp) <= tol * (1.0 + abs(sp)):
            break
        d2 = 2.0 * (d1 * d1 + v * d2)
        d1 = 2.0 * v * d1
        v = w
        half *= 0.5
    else:
        raise NonEscapingError(
            f"orbit of {z} did not converge the log-derivative series by depth {_MAX_DEPTH}")
    return LogDerivData(g=g, L=-s, Lp=-sp, depth=depth)


def ray_integrand(p: PolyParams, sample: RaySample) -> float:
    """Density of the radial-variation integral with respect to dh.

    |T''| |dw| = (|G''|/|G'|^2) |dz|, |G''|/|G'|^2 = e^g |Lp+L^2| / |L|^2,
    and |dz/dh| = pi / |L| along the ray, giving pi e^{pi h} |Lp+L^2|/|L|^3.
    """
    L = sample.data.L
    if abs(L) < 1e-14:
        raise SingularSampleError(
            f"|L| = {abs(L):.3e} at h = {sample.h}: sample too close to a critical point")
    return math.pi * math.exp(math.pi * sample.h) * abs(sample.data.second_ratio()) / abs(L) ** 3


def angle_double_fold(angle: DirectionAngle) -> tuple[DirectionAngle, bool]:
    """Fold the angle doubling back into (0, 1).

    Returns (frac(2 psi), flipped) where flipped records psi > 1/2, i.e.
    the doubled ray lands in the reflected half of the doubled comb.  The
    folded angle is the bit shift of the expansion; consumers restore the
    geometry with the sign flip P(gamma_psi(h)) = (-1)^{eps_1} gamma_{shift psi}(2h).
    """
    if angle.is_dyadic:
        raise DyadicAngleError(f"fold undefined for dyadic angle {angle}")
    return angle.shift(), angle.bit(1) == 1


def _log_boettcher(lam: float, z: complex, need_deriv: bool = True,
                   tol: float = 1e-15):
    """log B(z) (principal per-term branches) and B'/B at an already-large z.

    Requires |lam / z^2| < 1/2 so every Log(1 - lam/z_k^2) stays on the
    principal branch; callers guarantee largeness.
    """
    v = z
    if abs(lam) / abs(v * v) >= 0.5:
        raise ValueError("point not large enough for the Boettcher log series")
    ell = cmath.log(v)
    s = 1.0 / v if need_deriv else 0.0
    d1 = 1.0 + 0.0j
    half = 0.5
    for _ in range(48):
        w = v * v - lam
        q = lam / (v * v)
        term = half * cmath.log(1.0 - q)
        ell += term
        if need_deriv:
            s += half * 2.0 * lam * d1 / (v * w)
            d1 = 2.0 * v * d1
        if abs(term) < tol:
            break
        v = w
        half *= 0.5
    return ell, s


def _wrap_pi(x: float) -> float:
    """Reduce to (-pi, pi]."""
    return math.remainder(x, math.tau)


def default_heights(p: PolyParams, scales: int, per_scale: int = 16,
                    h_top: float | None = None) -> list[float]:
    """Geometric schedule h_j = h_top 2^{-j/per_scale} down to h_top 2^{-scales}."""
    if h_top is None:
        h_top = p.a if p.a > 0 else 1.0
    return [h_top * 2.0 ** (-j / per_scale) for j in range(scales * per_scale + 1)]


def _newton_depth(h: float, log_r: float) -> int:
    """Smallest n >= 0 with 2^n pi h > log_r."""
    n = 0
    x = math.pi * h
    while x <= log_r:
        x *= 2.0
        n += 1
        if n > 200:
            raise DomainError(f"height {h} too small for ray continuation")
    return n


def _solve_height(p: PolyParams, angle: DirectionAngle, h: float, seed: complex,
                  log_r: float, newton_tol: float, max_backtracks: int):
    """One Newton solve of the ray equation at height h, seeded nearby."""
    lam = p.lam
    q = angle.denominator
    n = _newton_depth(h, log_r)
    target_mod = float(2 ** n) * math.pi * h
    num = (pow(2, n, 2 * q) * angle.numerator) % (2 * q)
    target_arg = math.pi * (num / q)
    # forward squaring amplifies log-space rounding by 2^n; the residual
    # floor scales with it while the height error 2^-n phi does not
    tol_eff = max(newton_tol, float(2 ** n) * 5e-14)

    def residual(zz):
        v = zz
        d = 1.0 + 0.0j
        for _ in range(n):
            if abs(v) > 1e140:
                return None
            d = 2.0 * v * d
            v = v * v - lam
        if abs(v * v) <= 2.0 * abs(lam) + 4.0:
            return None
        try:
            ell, s = _log_boettcher(lam, v)
        except ValueError:
            return None
        phi = complex(ell.real - target_mod, _wrap_pi(ell.imag - target_arg))
        return phi, s * d

    z = seed
    res = residual(z)
    if res is None:
        raise NewtonDivergence(f"seed for h={h} lies outside the series domain")
    phi, dphi = res
    for _ in range(60):
        if abs(phi) < tol_eff:
            return z
        step = -phi / dphi
        if abs(step) <= 8.0 * 2.2e-16 * abs(z):
            # z converged to its representation quantum: the residual floor
            # |dphi| ulp(z) is unreachable but z is as exact as doubles allow
            return z
        scale = 1.0
        for _ in range(max_backtracks):
            trial = z + scale * step
            res = residual(trial)
            if res is not None and abs(res[0]) < abs(phi):
                z, (phi, dphi) = trial, res
                break
            scale *= 0.5
        else:
            raise NewtonDivergence(
                f"Newton stalled at h={h} with residual {abs(phi):.3e}")
    raise NewtonDivergence(f"Newton did not reach tolerance at h={h}")


def trace_ray(p: PolyParams, angle: DirectionAngle, h_schedule,
              newton_tol: float = 1e-13, series_tol: float = 1e-12,
              max_backtracks: int = 40, arc_bound: float | None = None,
              tip_margin: float = 1e-3) -> ExternalRay:
    """Continue the external ray at the given angle down the height schedule.

    Non-dyadic angles run to the smallest scheduled height.  Dyadic angles
    stop at the slit tip a/2^m: scheduled heights at or below the tip are
    dropped and the precritical tip point P^{-(m-1)}(0) (branch nearest
    the last sample) is reported as TipInfo.
    """
    heights = [float(h) for h in h_schedule]
    if not heights:
        raise DomainError("empty height schedule")
    if any(h2 >= h1 for h1, h2 in zip(heights, heights[1:])) or heights[-1] <= 0:
        raise DomainError("height schedule must be strictly decreasing and positive")

    r_big = max(p.escape_radius() ** 2, _MIN_NEWTON_MODULUS)
    log_r = math.log(r_big)

    tip_h = None
    if angle.is_dyadic:
        if p.a <= 0:
            tip_h = None  # degenerate comb: no slits, dyadic rays reach any h > 0
        else:
            m = angle.dyadic_level
            tip_h = p.a / 2.0 ** m
            heights = [h for h in heights if h > tip_h * (1.0 + tip_margin)]

    # lead-in from a self-seeding start height where depth 0 suffices
    work: list[tuple[float, bool]] = []
    top = heights[0] if heights else (tip_h * (1.0 + tip_margin) if tip_h else None)
    if top is None:
        raise DomainError("schedule lies entirely below the slit tip")
    h_lead = 1.1 * log_r / math.pi
    if top < h_lead:
        n_lead = max(2, int(16 * math.log2(h_lead / top)) + 1)
        for j in range(n_lead):
            h = h_lead * (top / h_lead) ** (j / n_lead)
            work.append((h, False))
    work.extend((h, True) for h in heights)
    if tip_h is not None:
        # unscheduled helper point just above the tip guides branch selection
        h_help = tip_h * (1.0 + tip_margin)
        if not heights or heights[-1] > h_help * (1.0 + 1e-9):
            work.append((h_help, False))

    samples: list[RaySample] = []
    z = None
    z_prev = None
    for h, scheduled in work:
        if z is None:
            # first work height is always above the lead height, so depth 0
            # applies and B ~ identity makes exp(M + i alpha) an exact seed
            z = cmath.exp(complex(math.pi * h, math.pi * angle.value))
        try:
            z = _solve_height(p, angle, h, z, log_r, newton_tol, max_backtracks)
        except NewtonDivergence as exc:
            exc.last_sample = samples[-1] if samples else None
            exc.partial = ExternalRay(angle=angle, samples=tuple(samples),
                                      termination="hmin", tip=None)
            raise
        if arc_bound is not None and z_prev is not None and abs(z - z_prev) > arc_bound:
            raise ScheduleTooCoarse(
                f"sample jump {abs(z - z_prev):.3e} exceeds arc bound {arc_bound:.3e}")
        z_prev = z
        if scheduled:
            samples.append(RaySample(h=h, z=z, data=log_deriv_jet(p, z, series_tol)))

    tip = None
    termination = "hmin"
    if tip_h is not None:
        m = angle.dyadic_level
        if m == 1:
            tip_point = 0.0 + 0.0j
        else:
            cands = preimages(p, 0.0j, m - 1)
            tip_point = min(cands, key=lambda c: abs(c - z_prev))
        tip = TipInfo(point=tip_point, height=tip_h)
        termination = "tip"
    return ExternalRay(angle=angle, samples=tuple(samples),
                       termination=termination, tip=tip)


RAY_CSV_COLUMNS = ("h", "re_z", "im_z", "g", "re_L", "im_L", "density")


def ray_csv_rows(p: PolyParams, ray: ExternalRay):
    """Yield the wire-format rows (header first) for a traced ray."""
    yield RAY_CSV_COLUMNS
    for s in ray.samples:
        yield (repr(s.h), repr(s.z.real), repr(s.z.imag), repr(s.data.g),
               repr(s.data.L.real), repr(s.data.L.imag),
               repr(ray_integrand(p, s)))
