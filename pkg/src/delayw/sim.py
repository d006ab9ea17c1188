"""Time-domain integration of x'(t) = alpha*x(t) + beta*x(t-h).

Method of steps with the classical 4th-order one-step scheme: each
interval of length h is an ODE whose delayed term reads the previous
interval through cubic Hermite dense output.  The step is snapped to
an integer fraction of h, so stage lookups at full steps land exactly
on stored nodes and only the half-step stages interpolate.  Global
error is O(step^4).

estimate_dominant_eig recovers the dominant characteristic root from
a trajectory tail: decay rate from a least-squares line through the
log of the peak envelope (or of |x| itself for non-oscillatory tails),
frequency from the mean zero-crossing spacing.
"""

import math
from dataclasses import dataclass

from .errors import DomainError, InsufficientData, InvalidStep, NonFiniteInput

__all__ = [
    "ConstantHistory",
    "LinearHistory",
    "SampledHistory",
    "InitialData",
    "Trajectory",
    "EigEstimate",
    "simulate",
    "estimate_dominant_eig",
    "estimate_dominant_eig_detailed",
]

# state magnitude past which the integration stops and flags truncation
OVERFLOW_LIMIT = 1e300


@dataclass(frozen=True)
class ConstantHistory:
    """phi(tau) = c on [-h, 0)."""

    c: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise NonFiniteInput(f"history constant must be finite, got {self.c!r}")

    def __call__(self, tau):
        return self.c


@dataclass(frozen=True)
class LinearHistory:
    """phi(tau) = c0 + c1*tau on [-h, 0)."""

    c0: float
    c1: float

    def __post_init__(self):
        if not (math.isfinite(self.c0) and math.isfinite(self.c1)):
            raise NonFiniteInput("history coefficients must be finite")

    def __call__(self, tau):
        return self.c0 + self.c1 * tau


@dataclass(frozen=True)
class SampledHistory:
    """Piecewise-linear history through (tau_i, x_i) samples.

    Stamps must be strictly increasing and start at the delay horizon;
    queries before the first or after the last stamp hold the edge
    value, so a sample list ending short of 0 stays evaluable on all
    of [-h, 0).
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((float(t), float(x)) for t, x in self.points)
        if len(pts) < 2:
            raise DomainError("sampled history needs at least two points")
        for (t0, x0), (t1, x1) in zip(pts, pts[1:]):
            if not (t1 > t0):
                raise DomainError("sample stamps must be strictly increasing")
        for t, x in pts:
            if not (math.isfinite(t) and math.isfinite(x)):
                raise NonFiniteInput("sample stamps and values must be finite")
        if pts[-1][0] >= 0.0:
            raise DomainError("sample stamps must stay below 0")
        object.__setattr__(self, "points", pts)

    def __call__(self, tau):
        pts = self.points
        if tau <= pts[0][0]:
            return pts[0][1]
        if tau >= pts[-1][0]:
            return pts[-1][1]
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= tau:
                lo = mid
            else:
                hi = mid
        (t0, x0), (t1, x1) = pts[lo], pts[hi]
        w = (tau - t0) / (t1 - t0)
        return x0 * (1.0 - w) + x1 * w


@dataclass(frozen=True)
class InitialData:
    """State at t = 0 plus the history segment feeding the delay term."""

    x0: float
    phi: object

    def __post_init__(self):
        if not math.isfinite(self.x0):
            raise NonFiniteInput(f"x0 must be finite, got {self.x0!r}")
        if not callable(self.phi):
            raise DomainError("phi must be callable on [-h, 0)")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution starting at t = 0.

    truncated marks an integration stopped early because the state
    magnitude passed OVERFLOW_LIMIT (a diverging loop), in which case
    the arrays hold everything computed up to that point.
    """

    times: tuple
    values: tuple
    step: float
    truncated: bool = False

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise DomainError("times and values must have equal length")
        if not self.times or self.times[0] != 0.0:
            raise DomainError("trajectory must start at t = 0")

    def to_csv(self):
        """Render as CSV with header "t,x", 17 significant digits."""
        lines = ["t,x"]
        for t, x in zip(self.times, self.values):
            lines.append(f"{t:.17g},{x:.17g}")
        return "\n".join(lines) + "\n"


def _validate_sampled_span(phi, h):
    if isinstance(phi, SampledHistory):
        first = phi.points[0][0]
        if abs(first + h) > 1e-9 * max(1.0, h):
            raise DomainError(
                f"sampled history must span [-h, 0): first stamp {first:.6g}, expected {-h:.6g}")


def simulate(cl, init, t_final, step=None):
    """Integrate the closed loop from the given initial data.

    Parameters
    ----------
    cl : ClosedLoopParams
    init : InitialData
    t_final : float
        End of the integration window; must be at least one delay.
    step : float, optional
        Nominal step, snapped down so an integer number of steps spans
        exactly one delay interval.  Defaults to h/1000.

    Returns
    -------
    Trajectory
        Samples on the uniform grid up to the last point <= t_final,
        or up to the overflow truncation point.
    """
    h = cl.h
    if step is None:
        step = h / 1000.0
    if not (isinstance(step, (int, float)) and math.isfinite(step) and step > 0.0):
        raise InvalidStep(f"step must be a positive finite real, got {step!r}")
    if not (math.isfinite(t_final) and t_final >= h):
        raise InvalidStep(
            f"t_final must be finite and >= h = {h:.6g} (one full delay interval), got {t_final!r}")
    _validate_sampled_span(init.phi, h)

    n_per = max(1, math.ceil(h / step - 1e-12))
    dt = h / n_per
    total = math.floor(t_final / dt + 1e-9)

    alpha, beta, phi = cl.alpha, cl.beta, init.phi
    xs = [init.x0]
    # node derivatives back the cubic dense output; the value at t - h
    # for t on the grid is itself a node (or a history query)
    fs = [alpha * init.x0 + beta * phi(-h)]
    truncated = False

    def node_delayed(j):
        jj = j - n_per
        if jj >= 0:
            return xs[jj]
        return phi(j * dt - h)

    def mid_delayed(j):
        jj = j - n_per
        if jj < 0:
            return phi((j + 0.5) * dt - h)
        x0, x1 = xs[jj], xs[jj + 1]
        f0, f1 = fs[jj], fs[jj + 1]
        # cubic Hermite at the segment midpoint
        return 0.5 * (x0 + x1) + 0.125 * dt * (f0 - f1)

    for i in range(total):
        x = xs[i]
        d_mid = mid_delayed(i)
        d_end = node_delayed(i + 1)
        k1 = fs[i]
        k2 = alpha * (x + 0.5 * dt * k1) + beta * d_mid
        k3 = alpha * (x + 0.5 * dt * k2) + beta * d_mid
        k4 = alpha * (x + dt * k3) + beta * d_end
        x_next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(x_next) or abs(x_next) > OVERFLOW_LIMIT:
            truncated = True
            break
        xs.append(x_next)
        fs.append(alpha * x_next + beta * d_end)

    times = tuple(i * dt for i in range(len(xs)))
    return Trajectory(times=times, values=tuple(xs), step=dt, truncated=truncated)


@dataclass(frozen=True)
class EigEstimate:
    """Dominant-eigenvalue fit with its diagnostics.

    kind is one of "constant", "oscillatory", "monotone".  fit_residual
    is the RMS deviation of the log-envelope fit; a large value flags
    degenerate excitation (tail dominated by more than one mode), where
    the plain estimate should not be trusted.
    """

    value: complex
    kind: str
    fit_residual: float
    n_crossings: int


def _lsq_slope(ts, ys):
    n = len(ts)
    tm = sum(ts) / n
    ym = sum(ys) / n
    num = sum((t - tm) * (y - ym) for t, y in zip(ts, ys))
    den = sum((t - tm) ** 2 for t in ts)
    slope = num / den
    icept = ym - slope * tm
    rss = sum((y - (icept + slope * t)) ** 2 for t, y in zip(ts, ys))
    return slope, math.sqrt(rss / n)


def estimate_dominant_eig_detailed(traj, tail_fraction=0.5):
    """Fit the dominant characteristic root to a trajectory tail.

    See estimate_dominant_eig for the contract; this variant returns
    the EigEstimate record with fit diagnostics instead of the bare
    complex value.
    """
    if not (0.0 < tail_fraction <= 1.0):
        raise DomainError(f"tail_fraction must lie in (0, 1], got {tail_fraction!r}")
    n = len(traj.values)
    start = min(n - 1, max(0, n - int(math.ceil(n * tail_fraction))))
    ts = traj.times[start:]
    xs = traj.values[start:]
    if len(xs) < 20:
        raise InsufficientData(f"tail holds {len(xs)} samples; need at least 20")

    amax = max(abs(x) for x in xs)
    spread = max(xs) - min(xs)
    if spread <= 1e-9 * max(1.0, amax):
        return EigEstimate(0j, "constant", spread, 0)

    # zero-crossing times by linear interpolation
    crossings = []
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        if a == 0.0:
            crossings.append(ts[i])
        elif (a > 0.0) != (b > 0.0) and b != 0.0:
            crossings.append(ts[i] + (ts[i + 1] - ts[i]) * a / (a - b))
    if xs[-1] == 0.0:
        crossings.append(ts[-1])

    if len(crossings) >= 10:
        spacings = [t1 - t0 for t0, t1 in zip(crossings, crossings[1:])]
        omega = math.pi / (sum(spacings) / len(spacings))
        # one peak of |x| between consecutive crossings
        peak_ts, peak_logs = [], []
        k = 0
        for t0, t1 in zip(crossings, crossings[1:]):
            best_t, best_a = None, 0.0
            while k < len(xs) and ts[k] <= t1:
                if ts[k] >= t0 and abs(xs[k]) > best_a:
                    best_t, best_a = ts[k], abs(xs[k])
                k += 1
            k = max(0, k - 1)
            if best_t is not None and best_a > 0.0:
                peak_ts.append(best_t)
                peak_logs.append(math.log(best_a))
        if len(peak_ts) < 4:
            raise InsufficientData("oscillatory tail with too few usable envelope peaks")
        rate, resid = _lsq_slope(peak_ts, peak_logs)
        return EigEstimate(complex(rate, omega), "oscillatory", resid, len(crossings))

    if crossings:
        raise InsufficientData(
            f"tail crosses zero {len(crossings)} times: too few for a frequency fit, "
            "too many for a monotone fit")
    # single-signed tail: fit log|x| directly
    if amax == 0.0 or min(abs(x) for x in xs) == 0.0:
        raise InsufficientData("tail touches zero without sign changes; no log fit possible")
    efold = abs(math.log(abs(xs[-1]) / abs(xs[0])))
    if efold < 10.0:
        raise InsufficientData(
            f"monotone tail spans {efold:.2f} e-foldings; need 10 for a trustworthy rate")
    rate, resid = _lsq_slope(ts, [math.log(abs(x)) for x in xs])
    return EigEstimate(complex(rate, 0.0), "monotone", resid, 0)


def estimate_dominant_eig(traj, tail_fraction=0.5):
    """Dominant characteristic root estimated from a trajectory tail.

    Oscillatory tails (at least 10 zero crossings, roughly 5 periods)
    give rate + i*frequency: the rate is the least-squares slope of the
    log peak envelope, the frequency pi over the mean crossing spacing.
    Single-signed tails need at least 10 e-foldings and give a real
    rate.  Near-constant tails return 0.

    Raises
    ------
    InsufficientData
        Tail too short, too few crossings/e-foldings, or zero values
        breaking the log fit.
    """
    return estimate_dominant_eig_detailed(traj, tail_fraction).value
