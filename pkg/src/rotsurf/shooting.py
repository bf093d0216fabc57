"""Classification of the shooting family and location of the critical height.

Every height lambda > 1 seeds a backward trajectory from (pi, lambda).  It
either crosses theta = 0 above z = 1 (periodic regime), dies on the domain
boundary with a limit height in (0, 1) (incomplete regimes, split by
lambda vs sqrt(2)), or -- for exactly one critical lambda0 -- limps into the
degenerate corner (0, 1).  Distinct heights cannot share a boundary limit
point, so the crossing predicate has a single threshold in lambda and plain
bisection is valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, InvalidLambdaError, RotsurfError
from .field import SQRT2, PhasePoint
from .integrate import IntegratorConfig, Trajectory, concat, integrate, reflect

SPHERE = "Sphere"
PERIODIC = "Periodic"
SEPARATRIX = "Separatrix"
INCOMPLETE_LOW = "IncompleteLow"
INCOMPLETE_HIGH = "IncompleteHigh"

SPHERE_HALF_SPAN = SQRT2 * math.pi / 2.0


@dataclass(frozen=True)
class LambdaClass:
    """Case tag plus the witnesses that pin it down."""

    tag: str
    crossing_z: float | None = None  # Periodic: z at the theta = 0 crossing
    limit_point: tuple[float, float] | None = None  # boundary limit (theta0, z0)
    span: float | None = None  # finite |t| to the trajectory end, where finite
    lambda0_bracket: tuple[float, float] | None = None  # Separatrix ambiguity


@dataclass(frozen=True)
class Lambda0Result:
    value: float
    bracket: tuple[float, float]
    iterations: int


@dataclass(frozen=True)
class PortraitEntry:
    lam: float
    klass: LambdaClass | None
    polyline: np.ndarray  # (n, 2) columns theta, z over the [0, 2*pi] lift
    error: str | None = None


@dataclass(frozen=True)
class PortraitReport:
    entries: tuple[PortraitEntry, ...]
    lambda0: Lambda0Result


def backward_trajectory(lam: float, cfg: IntegratorConfig) -> Trajectory:
    """Backward integral curve from (pi, lam), stopped at theta = 0 or contact."""
    return integrate(PhasePoint(math.pi, lam), "backward", cfg.with_targets(0.0))


def _crosses(lam: float, cfg: IntegratorConfig) -> bool:
    return backward_trajectory(lam, cfg).termination.kind == "theta_crossing"


def classify_lambda(
    lam: float,
    cfg: IntegratorConfig,
    *,
    tol_sphere: float = 1e-9,
    band: float = 1e-9,
) -> LambdaClass:
    """Assign one of the five cases to a shooting height.

    lam = sqrt(2) (within tol_sphere) is special-cased to the closed-form
    semicircle.  Trajectories creeping into the corner (0, 1) closer than
    the ambiguity band are reported as Separatrix rather than guessed a
    side.  Heights just above the critical one legitimately cross theta = 0
    and are classified Periodic.
    """
    if not lam > 1.0:
        raise InvalidLambdaError(f"need lambda > 1, got {lam}")
    if abs(lam - SQRT2) <= tol_sphere:
        return LambdaClass(SPHERE, limit_point=(math.pi / 2.0, 0.0), span=SPHERE_HALF_SPAN)

    traj = backward_trajectory(lam, cfg)
    stop = traj.termination
    if stop.kind == "theta_crossing":
        z_cross = float(traj.zs[0])
        if z_cross - 1.0 <= band:
            return LambdaClass(SEPARATRIX, crossing_z=z_cross, lambda0_bracket=(lam, lam))
        return LambdaClass(PERIODIC, crossing_z=z_cross)
    if stop.kind == "boundary_contact":
        theta0, z0 = stop.limit_point
        span = abs(stop.t_star)
        if abs(z0 - 1.0) <= band and abs(theta0) <= 2.0 * math.sqrt(2.0 * band):
            return LambdaClass(SEPARATRIX, limit_point=(theta0, z0), span=span,
                               lambda0_bracket=(lam, lam))
        tag = INCOMPLETE_LOW if lam < SQRT2 else INCOMPLETE_HIGH
        return LambdaClass(tag, limit_point=(theta0, z0), span=span)
    raise RotsurfError(f"classification inconclusive for lambda={lam}: hit {stop.kind}")


def find_lambda0(cfg: IntegratorConfig, tol: float = 1e-8) -> Lambda0Result:
    """Bisection on "the backward trajectory crosses theta = 0 above z = 1".

    The initial bracket doubles upward from sqrt(2) (which contacts the
    boundary, so the predicate is false there) until the predicate flips.
    Injectivity of boundary limit points guarantees a single threshold.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    lo = SQRT2
    hi = 2.0 * SQRT2
    while not _crosses(hi, cfg):
        lo = hi
        hi *= 2.0
        if hi > 65536.0:
            raise BracketError("no theta = 0 crossing found up to lambda = 2^16")
    iters = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _crosses(mid, cfg):
            hi = mid
        else:
            lo = mid
        iters += 1
    return Lambda0Result(0.5 * (lo + hi), (lo, hi), iters)


def _decimate(arr: np.ndarray, n_max: int) -> np.ndarray:
    if len(arr) <= n_max:
        return arr
    idx = np.unique(np.linspace(0, len(arr) - 1, n_max).round().astype(int))
    return arr[idx]


def _sphere_polyline(n: int) -> np.ndarray:
    ts = np.linspace(-SPHERE_HALF_SPAN * (1 - 1e-9), SPHERE_HALF_SPAN * (1 - 1e-9), n)
    theta = math.pi + ts / SQRT2
    z = SQRT2 * np.cos(ts / SQRT2)
    return np.column_stack([theta, z])


def full_curve(lam: float, cfg: IntegratorConfig) -> Trajectory:
    """Backward half from (pi, lam) joined with its mirror about theta = pi."""
    back = backward_trajectory(lam, cfg)
    return concat(back, reflect(back, 1))


def portrait(
    lambdas,
    cfg: IntegratorConfig,
    *,
    tol_lambda0: float = 1e-8,
    n_polyline: int = 400,
    tol_sphere: float = 1e-9,
    band: float = 1e-9,
) -> PortraitReport:
    """Classify a sweep of heights and attach plot-ready (theta, z) polylines.

    Per-entry failures are recorded in the entry instead of aborting the
    sweep.  lambda0 is always computed, even for an empty sweep.
    """
    lam0 = find_lambda0(cfg, tol=tol_lambda0)
    entries = []
    for lam in sorted(float(l) for l in lambdas):
        try:
            klass = classify_lambda(lam, cfg, tol_sphere=tol_sphere, band=band)
            if klass.tag == SPHERE:
                poly = _sphere_polyline(n_polyline)
            else:
                traj = full_curve(lam, cfg)
                poly = _decimate(np.column_stack([traj.thetas, traj.zs]), n_polyline)
            entries.append(PortraitEntry(lam, klass, poly))
        except RotsurfError as exc:
            entries.append(PortraitEntry(lam, None, np.empty((0, 2)), error=str(exc)))
    return PortraitReport(tuple(entries), lam0)
