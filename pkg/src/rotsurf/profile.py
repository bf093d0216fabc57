"""Arc-length profile curves, their closed forms, and derived constructions.

A profile curve (x(t), z(t)) with tangent angle theta(t) generates a
revolution surface about the x-axis; t is simultaneously arc length.
Trajectory-built profiles keep the quadrature convention x(0) = 0.  The
closed-form sphere follows the displayed parametrization centered at
(-sqrt(2), 0), i.e. the same quadrature shifted left by sqrt(2).
"""

from __future__ import annotations

import bisect as _bisect
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (
    DegenerateProfileError,
    ExtensionSpecError,
    NoSignChangeError,
    NotPeriodicError,
    TooFewSamplesError,
)
from .field import SQRT2, PhasePoint
from .integrate import (
    IntegratorConfig,
    Trajectory,
    concat,
    corner_series,
    integrate,
    launch_separatrix,
    reflect,
)
from .shooting import PERIODIC, classify_lambda

TWO_PI = 2.0 * math.pi


@dataclass
class ProfileCurve:
    """Sampled unit-speed generator curve, optionally with a dense evaluator.

    Samples are ascending in t; z stays positive; theta is the unwrapped
    tangent angle and is non-decreasing (strictly increasing except on the
    horizontal stretches of extensions and the cylinder).
    """

    t: np.ndarray
    x: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    kind: str = "Generic"
    junctions: tuple = ()
    meta: dict = dc_field(default_factory=dict)
    evaluator: object = dc_field(default=None, repr=False)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.z = np.asarray(self.z, dtype=float)
        self.theta = np.asarray(self.theta, dtype=float)
        if len(self.t) < 2:
            raise TooFewSamplesError("profile needs at least 2 samples")
        if not np.all(np.diff(self.t) > 0.0):
            raise ValueError("profile times must be strictly increasing")
        if not np.all(self.z > 0.0):
            raise DegenerateProfileError("profile has z <= 0")

    def __len__(self):
        return len(self.t)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def eval_at(self, tq: float) -> tuple[float, float, float]:
        """(x, z, theta) at tq, from the dense evaluator or spline fallback.

        The fallback fits quintic B-splines (cubic for very short profiles):
        curvature verification differentiates twice, and a cubic fit of
        CSV-loaded data would leak interpolation noise into the residual.
        """
        if self.evaluator is not None:
            return self.evaluator(tq)
        if "splines" not in self.meta:
            from scipy.interpolate import make_interp_spline

            k = 5 if len(self.t) > 6 else min(3, len(self.t) - 1)
            self.meta["splines"] = (
                make_interp_spline(self.t, self.x, k=k),
                make_interp_spline(self.t, self.z, k=k),
                make_interp_spline(self.t, self.theta, k=k),
            )
        sx, sz, sth = self.meta["splines"]
        return float(sx(tq)), float(sz(tq)), float(sth(tq))

    def write_csv(self, sink) -> None:
        """Header t,x,z,theta; one sample per line at 17 significant digits."""
        own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
        fh = open(sink, "w", newline="\n") if own else sink
        try:
            fh.write("t,x,z,theta\n")
            for t, x, z, th in zip(self.t, self.x, self.z, self.theta):
                fh.write(f"{t:.17g},{x:.17g},{z:.17g},{th:.17g}\n")
        finally:
            if own:
                fh.close()

    @classmethod
    def read_csv(cls, source) -> "ProfileCurve":
        own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
        fh = open(source, "r") if own else source
        try:
            header = fh.readline().strip()
            if header != "t,x,z,theta":
                raise ValueError(f"unexpected profile CSV header: {header!r}")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        finally:
            if own:
                fh.close()
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3])


@dataclass(frozen=True)
class PeriodInfo:
    t0: float  # theta(-t0) = 0 on the backward half
    period: float  # 2 * t0
    x_shift: float  # x(2 t0): horizontal translation per period
    z_residual: float
    theta_residual: float
    x_residual: float


@dataclass(frozen=True)
class IntersectionInfo:
    t2: float
    point: tuple[float, float]  # the double point (x, z), x = 0 up to tolerance
    x_abs: float  # max |x(t2)|, |x(-t2)|
    z_mismatch: float  # |z(t2) - z(-t2)|


@dataclass(frozen=True)
class ExtensionSpec:
    """Gluing plan: copies of the critical profile joined by horizontal
    segments of height 1 (zero length means copies abut directly)."""

    copies: int
    segment_lengths: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "segment_lengths",
                           tuple(float(v) for v in self.segment_lengths))
        if self.copies < 1:
            raise ExtensionSpecError("need at least one copy")
        if len(self.segment_lengths) != self.copies - 1:
            raise ExtensionSpecError(
                f"{self.copies} copies need {self.copies - 1} segment lengths, "
                f"got {len(self.segment_lengths)}")
        if any(l < 0.0 for l in self.segment_lengths):
            raise ExtensionSpecError("segment lengths must be non-negative")


@dataclass(frozen=True)
class JunctionReport:
    t: float
    junction_type: str  # "copy-copy" | "copy-segment" | "segment-copy"
    position_jump: float
    theta_jump: float
    dtheta_jump: float
    d2theta_jump: float
    d3theta_jump: float
    order: str  # highest verified continuity class of the curve


@dataclass(frozen=True)
class RegularityReport:
    junctions: tuple
    h: float


@dataclass(frozen=True)
class VerificationReport:
    max_curvature_residual: float  # max |k1^2 + k2^2 - 1| from resampled data
    max_speed_residual: float  # max |hypot(x', z') - 1|
    monotone_violations: int
    n_points: int
    h: float
    end_trim: float  # collar excluded at the two profile ends


# -- construction --------------------------------------------------------


def build_profile(traj: Trajectory, sample_dt: float = 0.01, kind: str = "Generic") -> ProfileCurve:
    """Extract (t, x, z, theta) from a trajectory, regularized to sample_dt.

    Gaps larger than sample_dt are filled from the dense output; nodes
    closer than sample_dt/4 are dropped (except the endpoints), so the
    stored grid stays compatible with fine resampling.
    """
    raw = [float(traj.ts[0])]
    for a, b in zip(traj.ts[:-1], traj.ts[1:]):
        gap = float(b - a)
        if gap > sample_dt:
            n = int(math.ceil(gap / sample_dt))
            raw.extend(float(a) + gap * k / n for k in range(1, n))
        raw.append(float(b))
    ts = [raw[0]]
    for t in raw[1:-1]:
        if t - ts[-1] >= 0.25 * sample_dt:
            ts.append(t)
    if raw[-1] - ts[-1] < 0.25 * sample_dt and len(ts) > 1:
        ts.pop()
    ts.append(raw[-1])
    ts = np.asarray(ts)
    states = [traj.state_at(t) for t in ts]
    theta = np.array([s[0] for s in states])
    z = np.array([s[1] for s in states])
    x = np.array([s[2] for s in states])

    def evaluator(tq, _traj=traj):
        th, zz, xx = _traj.state_at(tq)
        return xx, zz, th

    return ProfileCurve(ts, x, z, theta, kind=kind, evaluator=evaluator,
                        meta={"source": "trajectory"})


def sphere_profile(n: int = 1201, trim: float = 1e-6) -> ProfileCurve:
    """Closed-form arc-length semicircle of radius sqrt(2) about (-sqrt(2), 0).

    The open span (-sqrt(2) pi/2, sqrt(2) pi/2) is trimmed by `trim` at both
    ends so that z stays positive (the surface misses its two poles).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    half = SQRT2 * math.pi / 2.0 - trim
    t = np.linspace(-half, half, n)

    def evaluator(tq):
        return (-SQRT2 * math.sin(tq / SQRT2) - SQRT2,
                SQRT2 * math.cos(tq / SQRT2),
                math.pi + tq / SQRT2)

    x = -SQRT2 * np.sin(t / SQRT2) - SQRT2
    z = SQRT2 * np.cos(t / SQRT2)
    theta = math.pi + t / SQRT2
    return ProfileCurve(t, x, z, theta, kind="Sphere", evaluator=evaluator,
                        meta={"center": (-SQRT2, 0.0), "radius": SQRT2})


def cylinder_profile(length: float, n: int = 2) -> ProfileCurve:
    """Horizontal unit-height segment: curvature pair (0, -1)."""
    if not length > 0.0:
        raise ValueError("length must be positive")
    if n < 2:
        raise ValueError("need n >= 2")
    t = np.linspace(0.0, length, n)

    def evaluator(tq):
        return tq, 1.0, 0.0

    return ProfileCurve(t, t.copy(), np.ones_like(t), np.zeros_like(t),
                        kind="Cylinder", evaluator=evaluator)


def separatrix_profile(cfg: IntegratorConfig, s0: float = 1e-3,
                       sample_dt: float = 0.01) -> ProfileCurve:
    """The critical profile on its full finite span [-b, b].

    Internally: series launch up to theta = pi, re-based so theta(0) = pi and
    x(0) = 0, mirrored about theta = pi; the two short tails within s0 of
    the corners are evaluated from the series itself.  meta carries
    half_span (b), lambda0 (terminal height), and x_corner = x(-b).
    """
    launch = launch_separatrix(cfg, s0=s0)
    t_cross = float(launch.ts[-1])
    x_cross = float(launch.xs[-1])
    lambda0 = float(launch.zs[-1])
    b = t_cross + s0
    half = launch.shifted(dt=-t_cross, dx=-x_cross)
    full = concat(half, reflect(half, 1))
    _, _, x_ser0 = corner_series(s0)
    x_corner = -x_cross - x_ser0
    t_in = b - s0  # dense data covers [-t_in, t_in]

    def evaluator(tq):
        if tq <= -t_in:
            s = max(tq + b, 0.0)
            th, zz, xr = corner_series(s)
            return x_corner + xr, zz, th
        if tq >= t_in:
            s = max(b - tq, 0.0)
            th, zz, xr = corner_series(s)
            return -x_corner - xr, zz, TWO_PI - th
        xx = full.state_at(tq)
        return xx[2], xx[1], xx[0]

    n = int(math.ceil(2.0 * b / sample_dt))
    ts = np.linspace(-b, b, n + 1)
    vals = [evaluator(t) for t in ts]
    x = np.array([v[0] for v in vals])
    z = np.array([v[1] for v in vals])
    theta = np.array([v[2] for v in vals])
    return ProfileCurve(ts, x, z, theta, kind="Separatrix", evaluator=evaluator,
                        meta={"half_span": b, "lambda0": lambda0,
                              "x_corner": x_corner, "s0": s0})


# -- periodicity and self-intersection ------------------------------------


def find_period(lam: float, cfg: IntegratorConfig, n_check: int = 800) -> PeriodInfo:
    """Period data for a height above the critical one, with verification.

    t0 is the theta = 0 crossing time of the backward trajectory; the shift
    identities z(t + 2 t0) = z(t), theta(t + 2 t0) = theta(t) + 2 pi and
    x(t + 2 t0) = x(t) + x(2 t0) are measured on a one-period overlap.
    """
    klass = classify_lambda(lam, cfg)
    if klass.tag != PERIODIC:
        raise NotPeriodicError(f"lambda={lam} classifies as {klass.tag}")
    back = integrate(PhasePoint(math.pi, lam), "backward", cfg.with_targets(-TWO_PI))
    t_zero = back.crossing_time(0.0)
    if t_zero is None:
        raise NotPeriodicError(f"no theta = 0 crossing for lambda={lam}")
    t0 = -t_zero
    full = concat(back, reflect(back, 1))
    x_shift = full.state_at(2.0 * t0)[2]
    res_z = res_th = res_x = 0.0
    for t in np.linspace(-t0, t0, n_check):
        th_a, z_a, x_a = full.state_at(float(t))
        th_b, z_b, x_b = full.state_at(float(t) + 2.0 * t0)
        res_z = max(res_z, abs(z_b - z_a))
        res_th = max(res_th, abs(th_b - th_a - TWO_PI))
        res_x = max(res_x, abs(x_b - x_a - x_shift))
    return PeriodInfo(t0, 2.0 * t0, x_shift, res_z, res_th, res_x)


def find_self_intersection(profile: ProfileCurve, t0: float, t1: float) -> IntersectionInfo:
    """The double point of a symmetric profile: the root t2 of x(-t) on (t1, t0).

    Preconditions (the construction of the periodic family): the profile is
    symmetric about t = 0 and x(-t0) < 0 < x(-t1), with t1 the theta = pi/2
    crossing time of the backward half.
    """
    if not 0.0 < t1 < t0:
        raise NoSignChangeError(f"need 0 < t1 < t0, got t1={t1}, t0={t0}")
    g = lambda t: profile.eval_at(-t)[0]
    g1, g0 = g(t1), g(t0)
    if not (g1 > 0.0 > g0):
        raise NoSignChangeError(
            f"bracket precondition failed: x(-t1)={g1}, x(-t0)={g0}")
    a, b = t1, t0
    for _ in range(200):
        m = 0.5 * (a + b)
        gm = g(m)
        if gm == 0.0:
            a = b = m
            break
        if gm > 0.0:
            a = m
        else:
            b = m
        if b - a <= 1e-16 * max(1.0, b):
            break
    t2 = 0.5 * (a + b)
    x_p, z_p, _ = profile.eval_at(t2)
    x_m, z_m, _ = profile.eval_at(-t2)
    return IntersectionInfo(
        t2=t2,
        point=(0.5 * (x_p + x_m), 0.5 * (z_p + z_m)),
        x_abs=max(abs(x_p), abs(x_m)),
        z_mismatch=abs(z_p - z_m),
    )


# -- the glued family -----------------------------------------------------


def extend_separatrix(ext: ExtensionSpec, cfg: IntegratorConfig, *,
                      s0: float = 1e-3, sample_dt: float = 0.01,
                      h_check: float = 4e-3) -> tuple[ProfileCurve, RegularityReport]:
    """Glue copies of the critical profile with horizontal unit-height segments.

    The glued curve starts at t = 0, x = 0 with the left corner of the first
    copy; each copy lifts theta by 2 pi, each segment holds theta constant.
    Zero-length segments collapse to direct copy-copy junctions.  The report
    measures one-sided jumps of theta and its first three derivatives at
    every junction (one-sided finite differences at step h_check) and grades
    the junction C0..C4+ against thresholds max(1e-3, 50 h^(4-k)).

    With copies=1 the result is the critical profile itself, re-based to
    t in [0, 2b] and x(0) = 0.
    """
    sep = separatrix_profile(cfg, s0=s0, sample_dt=sample_dt)
    b = sep.meta["half_span"]
    x_corner = sep.meta["x_corner"]
    width = -2.0 * x_corner

    pieces = []  # (t_start, t_end, kind, x_start, theta_offset)
    junctions = []  # (t, type)
    cursor_t = 0.0
    cursor_x = 0.0
    for j in range(ext.copies):
        if j > 0:
            seg_len = ext.segment_lengths[j - 1]
            if seg_len > 0.0:
                junctions.append((cursor_t, "copy-segment"))
                pieces.append((cursor_t, cursor_t + seg_len, "segment", cursor_x, TWO_PI * j))
                cursor_t += seg_len
                cursor_x += seg_len
                junctions.append((cursor_t, "segment-copy"))
            else:
                junctions.append((cursor_t, "copy-copy"))
        pieces.append((cursor_t, cursor_t + 2.0 * b, "copy", cursor_x, TWO_PI * j))
        cursor_t += 2.0 * b
        cursor_x += width

    def eval_piece(piece, tq):
        t_start, t_end, kind, x_start, th_off = piece
        if kind == "segment":
            return x_start + (tq - t_start), 1.0, th_off
        tau = (tq - t_start) - b
        xx, zz, th = sep.eval_at(min(max(tau, -b), b))
        return x_start + (xx - x_corner), zz, th + th_off

    starts = [p[0] for p in pieces]

    def evaluator(tq):
        i = min(max(_bisect.bisect_right(starts, tq) - 1, 0), len(pieces) - 1)
        return eval_piece(pieces[i], tq)

    ts_all = []
    vals_all = []
    for piece in pieces:
        t_start, t_end = piece[0], piece[1]
        n = max(int(math.ceil((t_end - t_start) / sample_dt)), 1)
        grid = np.linspace(t_start, t_end, n + 1)
        if ts_all:
            grid = grid[1:]
        ts_all.extend(grid)
        vals_all.extend(eval_piece(piece, t) for t in grid)
    ts_all = np.asarray(ts_all)
    x = np.array([v[0] for v in vals_all])
    z = np.array([v[1] for v in vals_all])
    theta = np.array([v[2] for v in vals_all])
    curve = ProfileCurve(ts_all, x, z, theta, kind="Extension",
                         junctions=tuple(t for t, _ in junctions),
                         evaluator=evaluator,
                         meta={"half_span": b, "lambda0": sep.meta["lambda0"],
                               "copy_width": width})

    # One-sided regularity measurement at each junction.
    h = h_check

    def one_sided(piece, t_j, sgn):
        f = [eval_piece(piece, t_j + sgn * k * h)[2] for k in range(5)]
        d1 = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
        d2 = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h)
        d3 = (-5 * f[0] + 18 * f[1] - 24 * f[2] + 14 * f[3] - 3 * f[4]) / (2 * h ** 3)
        return sgn * d1, d2, sgn * d3

    def threshold(k):
        return max(1e-3, 50.0 * h ** (4 - k))

    reports = []
    for t_j, jtype in junctions:
        left = next(p for p in pieces if abs(p[1] - t_j) < 1e-12)
        right = next(p for p in pieces if abs(p[0] - t_j) < 1e-12)
        xl, zl, thl = eval_piece(left, t_j)
        xr, zr, thr_ = eval_piece(right, t_j)
        pos_jump = math.hypot(xr - xl, zr - zl)
        theta_jump = abs(thr_ - thl)
        dl = one_sided(left, t_j, -1.0)
        dr = one_sided(right, t_j, +1.0)
        jumps = [abs(dr[i] - dl[i]) for i in range(3)]
        order = "C0"
        if pos_jump <= threshold(0):
            if theta_jump <= threshold(0):
                order = "C1"
                for k, jump in enumerate(jumps, start=1):
                    if jump <= threshold(k):
                        order = f"C{k + 1}"
                    else:
                        break
                if order == "C4":
                    order = "C4+"
        reports.append(JunctionReport(t_j, jtype, pos_jump, theta_jump,
                                      jumps[0], jumps[1], jumps[2], order))
    return curve, RegularityReport(tuple(reports), h)


# -- the acceptance oracle -------------------------------------------------


def verify_profile(profile: ProfileCurve, h: float,
                   end_trim: float | None = None) -> VerificationReport:
    """Reconstruct curvatures from positions only and check k1^2 + k2^2 = 1.

    Resamples (x, z) uniformly at step h, differentiates by central
    differences, rebuilds the tangent angle with atan2 and nearest-branch
    unwrapping, and reports the worst curvature residual, unit-speed
    violation, and count of decreasing-theta steps.  Deliberately ignores
    the stored theta and the field: this is the independent check that
    emitted geometry satisfies the unit curvature-norm everywhere.

    A collar of width end_trim (default 10 h) is excluded at the two open
    ends: profiles that die on the domain boundary have theta ~ c s^(3/2)
    in the distance s to the end, so difference quotients there measure the
    estimator's own blowup, not the surface.  Interior-smooth profiles are
    unaffected by the trim.
    """
    if not h > 0.0:
        raise ValueError("h must be positive")
    if end_trim is None:
        end_trim = 10.0 * h
    t_lo, t_hi = profile.span
    n = int(math.floor((t_hi - t_lo) / h))
    min_gap = float(np.min(np.diff(profile.t)))
    if len(profile) > 2 and h >= 0.5 * min_gap:
        raise TooFewSamplesError(
            f"resample step {h} too coarse for sample gap {min_gap}")
    ts = t_lo + h * np.arange(n + 1)
    inner = (ts[2:-2] >= t_lo + end_trim) & (ts[2:-2] <= t_hi - end_trim)
    if n < 8 or not np.any(inner):
        raise TooFewSamplesError(f"only {n} resample steps fit the span")
    vals = [profile.eval_at(float(t)) for t in ts]
    xs = np.array([v[0] for v in vals])
    zs = np.array([v[1] for v in vals])

    dx = (xs[2:] - xs[:-2]) / (2.0 * h)  # at ts[1:-1]
    dz = (zs[2:] - zs[:-2]) / (2.0 * h)
    theta_rec = np.unwrap(np.arctan2(dz, dx))
    k1 = (theta_rec[2:] - theta_rec[:-2]) / (2.0 * h)  # at ts[2:-2]
    k2 = -np.cos(theta_rec[1:-1]) / zs[2:-2]
    residual = float(np.max(np.abs(k1 * k1 + k2 * k2 - 1.0)[inner]))
    mid = (ts[1:-1] >= t_lo + end_trim) & (ts[1:-1] <= t_hi - end_trim)
    speed_residual = float(np.max(np.abs(np.hypot(dx, dz) - 1.0)[mid]))
    monotone_violations = int(np.sum(np.diff(theta_rec[mid]) < -1e-9))
    return VerificationReport(residual, speed_residual, monotone_violations,
                              len(ts), h, end_trim)
