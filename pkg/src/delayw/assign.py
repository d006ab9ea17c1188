"""Feedback design placing the rightmost eigenvalue at a chosen point.

For the closed loop x'(t) = alpha*x(t) + beta*x(t-h), a complex target
S = u + iv (v > 0) is the branch-0 root exactly when (S - alpha)*h lies
on the curve {-eta*cot(eta) + i*eta : 0 < eta < pi}, which pins

    alpha = u + v*cot(v h),      beta = -v*e^{u h} / sin(v h).

Each design mode solves for the gains its free parameters allow and
certifies the algebraic condition the remaining parameters must already
satisfy.  All gain arithmetic is carried out in real form; the target
is normalized to v >= 0 first, so conjugate targets give identical
results.  Targets with v*h outside (0, pi) still become eigenvalues but
of a higher branch, never the rightmost one.
"""

import enum
import math
from dataclasses import dataclass

from .errors import (
    AlphaOutOfRange,
    ConditionViolated,
    DomainError,
    NonFiniteInput,
    NotAssignableAsRightmost,
)
from .lambertw import on_w0_boundary
from .spectrum import ClosedLoopParams, Gains, SystemParams, spectrum

__all__ = [
    "Target",
    "AssignmentMode",
    "AssignmentResult",
    "ModeCheck",
    "FeasibilityReport",
    "as_target",
    "assign_both",
    "assign_delay_only",
    "assign_current_only",
    "assign_real_both",
    "assign_input_delay",
    "feasibility_report",
]

# relative tolerance for algebraic feasibility conditions
COND_TOL_DEFAULT = 1e-9
# |(S - alpha)*h + 1| below this means the design lands exactly on the
# W branch point: rightmost root of multiplicity two
MARGINAL_TOL = 1e-12


@dataclass(frozen=True)
class Target:
    """Desired rightmost eigenvalue, normalized to Im S >= 0."""

    S: complex
    u: float
    v: float


def as_target(S):
    """Normalize a number (or Target) into a Target with v >= 0."""
    if isinstance(S, Target):
        return S
    S = complex(S)
    if not (math.isfinite(S.real) and math.isfinite(S.imag)):
        raise NonFiniteInput(f"target must be finite, got {S!r}")
    u = S.real
    v = abs(S.imag)
    return Target(S=complex(u, v), u=u, v=v)


class AssignmentMode(enum.Enum):
    BOTH_GAINS = "both_gains"
    DELAY_ONLY = "delay_only"
    CURRENT_ONLY = "current_only"
    REAL_BOTH = "real_both"
    INPUT_DELAY = "input_delay"


@dataclass(frozen=True)
class AssignmentResult:
    """Outcome of one design mode.

    closed_loop holds the designed coefficients (alpha, beta) directly;
    re-deriving them from the plant and gains (a1d + b*k1d) can erase
    beta through cancellation whenever |beta| << |a1d|, so the two agree
    only to absolute rounding in the gain representation.
    """

    mode: AssignmentMode
    gains: Gains
    closed_loop: ClosedLoopParams
    predicted_rightmost: complex
    feasible: bool
    certificate: str


def _require_direct(sys, op):
    if sys.input_delay:
        raise DomainError(f"{op} applies to delayed-state plants; use assign_input_delay for input-delay plants")


def _require_complex(t, op):
    if t.v == 0.0:
        raise DomainError(f"{op} needs a complex target; for a real target use assign_real_both")


def _window_violation(vh):
    """Signed distance by which v*h leaves the open interval (0, pi)."""
    if vh <= 0.0:
        return vh
    if vh >= math.pi:
        return vh - math.pi
    return None


def _boundary_cert(u, v, alpha, h):
    w = complex((u - alpha) * h, v * h)
    ok = on_w0_boundary(w, 1e-9)
    return f"(S - alpha)*h on branch-0 boundary: {ok}"


def assign_both(sys, S):
    """Place a complex target using both feedback gains.

    alpha and beta are fully determined by the target, so the only
    obstacle is the window 0 < v*h < pi.  Outside it the same gains
    still make S an eigenvalue, just not the rightmost one; the raised
    NotAssignableAsRightmost carries those would-be gains.
    """
    _require_direct(sys, "assign_both")
    t = as_target(S)
    _require_complex(t, "assign_both")
    h = sys.h
    vh = t.v * h
    sv = math.sin(vh)
    cv = math.cos(vh)
    viol = _window_violation(vh)
    if viol is not None and sv == 0.0:
        raise NotAssignableAsRightmost(
            f"v*h = {vh:.9g} is a multiple of pi; the gain formulas are singular there",
            window=(0.0, math.pi / h),
        )
    alpha = t.u + t.v * cv / sv
    beta = -t.v * math.exp(t.u * h) / sv
    gains = Gains(k=(alpha - sys.a) / sys.b, k1d=(beta - sys.a1d) / sys.b)
    # carry the designed coefficients, not close_loop(sys, gains): the
    # gain round trip a1d + b*k1d loses beta to cancellation once
    # |beta| << |a1d| (deep-left targets make beta ~ e^{u h})
    cl = ClosedLoopParams(alpha, beta, h)
    if viol is not None:
        raise NotAssignableAsRightmost(
            f"v*h = {vh:.9g} outside (0, pi): S would be an eigenvalue of a higher branch, "
            f"so a root with larger real part exists",
            gains=gains,
            closed_loop=cl,
            window=(0.0, math.pi / h),
        )
    cert = f"window 0 < v*h < pi holds (v*h = {vh:.9g}); " + _boundary_cert(t.u, t.v, alpha, h)
    return AssignmentResult(AssignmentMode.BOTH_GAINS, gains, cl, t.S, True, cert)


def _delay_only_value(sys, t, cond_tol, op):
    """Real value of (S - a)*e^{S h}, with the mode's precondition checks."""
    a, h = sys.a, sys.h
    if t.v == 0.0:
        margin = t.u - (a - 1.0 / h)
        if margin < 0.0:
            raise ConditionViolated(
                f"real target must satisfy S >= a - 1/h = {a - 1.0 / h:.9g}; margin {margin:.6g}",
                residual=margin,
            )
        cert = f"S >= a - 1/h holds with margin {margin:.6g}"
        if abs((t.u - a) * h + 1.0) <= MARGINAL_TOL:
            cert += "; marginal: double rightmost root"
        return (t.u - a) * math.exp(t.u * h), cert
    vh = t.v * h
    viol = _window_violation(vh)
    if viol is not None:
        raise ConditionViolated(
            f"v*h = {vh:.9g} outside (0, pi); {op} cannot make S the rightmost root",
            residual=viol,
        )
    sv = math.sin(vh)
    cv = math.cos(vh)
    cot_term = t.v * cv / sv
    r = a - t.u - cot_term
    scale = max(1.0, abs(a), abs(t.u), abs(cot_term))
    if abs(r) > cond_tol * scale:
        raise ConditionViolated(
            f"a = u + v*cot(v*h) fails: residual {r:.6g} exceeds tol {cond_tol:g} (relative)",
            residual=r,
        )
    cert = f"a = u + v*cot(v*h) holds (residual {r:.3e}); window 0 < v*h < pi holds (v*h = {vh:.9g})"
    return math.exp(t.u * h) * ((t.u - a) * cv - t.v * sv), cert


def assign_delay_only(sys, S, cond_tol=COND_TOL_DEFAULT):
    """Place the target with the delayed-state gain alone (k = 0).

    alpha stays at the plant's a, so a complex target must already
    satisfy a = u + v*cot(v h); a real target needs S >= a - 1/h.
    """
    _require_direct(sys, "assign_delay_only")
    t = as_target(S)
    value, cert = _delay_only_value(sys, t, cond_tol, "assign_delay_only")
    gains = Gains(k=0.0, k1d=(value - sys.a1d) / sys.b)
    cl = ClosedLoopParams(sys.a, value, sys.h)
    return AssignmentResult(AssignmentMode.DELAY_ONLY, gains, cl, t.S, True, cert)


def assign_current_only(sys, S, cond_tol=COND_TOL_DEFAULT):
    """Place the target with the current-state gain alone (k1d = 0).

    beta stays at the plant's a1d.  A complex target needs
    a1d + v*e^{u h}*csc(v h) = 0.  A real target always becomes an
    eigenvalue, but it is the rightmost one only when the implied
    (S - alpha)*h >= -1; that is checked after the fact against the
    computed spectrum and reported through the feasible flag instead
    of an exception.
    """
    _require_direct(sys, "assign_current_only")
    t = as_target(S)
    a, a1d, h = sys.a, sys.a1d, sys.h
    if t.v == 0.0:
        k = (t.u - a - a1d * math.exp(-t.u * h)) / sys.b
        gains = Gains(k=k, k1d=0.0)
        cl = ClosedLoopParams(t.u - a1d * math.exp(-t.u * h), a1d, h)
        rm = spectrum(cl, n_branches=0).rightmost
        dist = abs(rm - t.S)
        feasible = dist <= 1e-10
        x = a1d * h * math.exp(-t.u * h)  # (S - alpha)*h at the designed gain
        cert = (
            f"S is an eigenvalue by construction; (S - alpha)*h = {x:.9g} "
            f"({'>=' if x >= -1.0 else '<'} -1); spectrum rightmost = "
            f"{rm.real:.9g}{rm.imag:+.9g}i, |rightmost - S| = {dist:.3e}"
        )
        return AssignmentResult(AssignmentMode.CURRENT_ONLY, gains, cl, t.S, feasible, cert)
    vh = t.v * h
    viol = _window_violation(vh)
    if viol is not None:
        raise ConditionViolated(
            f"v*h = {vh:.9g} outside (0, pi); assign_current_only cannot make S the rightmost root",
            residual=viol,
        )
    sv = math.sin(vh)
    cv = math.cos(vh)
    csc_term = t.v * math.exp(t.u * h) / sv
    r = a1d + csc_term
    scale = max(1.0, abs(a1d), abs(csc_term))
    if abs(r) > cond_tol * scale:
        raise ConditionViolated(
            f"a1d + v*e^(u*h)*csc(v*h) = 0 fails: residual {r:.6g} exceeds tol {cond_tol:g} (relative)",
            residual=r,
        )
    k = (t.u - a - a1d * math.exp(-t.u * h) * cv) / sys.b
    gains = Gains(k=k, k1d=0.0)
    cl = ClosedLoopParams(t.u - a1d * math.exp(-t.u * h) * cv, a1d, h)
    cert = (
        f"a1d + v*e^(u*h)*csc(v*h) = 0 holds (residual {r:.3e}); "
        f"window 0 < v*h < pi holds (v*h = {vh:.9g})"
    )
    return AssignmentResult(AssignmentMode.CURRENT_ONLY, gains, cl, t.S, True, cert)


def assign_real_both(sys, S, alpha_choice=None):
    """Place a real target using both gains, one degree of freedom free.

    Any alpha <= S + 1/h works; beta = (S - alpha)*e^{S h} then puts
    the branch-0 root at S.  The default alpha = S gives beta = 0, a
    delay-free closed loop.
    """
    _require_direct(sys, "assign_real_both")
    t = as_target(S)
    if t.v != 0.0:
        raise DomainError("assign_real_both needs a real target; for a complex target use assign_both")
    h = sys.h
    alpha = t.u if alpha_choice is None else float(alpha_choice)
    if not math.isfinite(alpha):
        raise NonFiniteInput(f"alpha_choice must be finite, got {alpha_choice!r}")
    bound = t.u + 1.0 / h
    if alpha > bound:
        raise AlphaOutOfRange(
            f"alpha = {alpha:.9g} exceeds S + 1/h = {bound:.9g}; the branch-0 root would lie right of S",
            margin=bound - alpha,
        )
    beta = (t.u - alpha) * math.exp(t.u * h)
    gains = Gains(k=(alpha - sys.a) / sys.b, k1d=(beta - sys.a1d) / sys.b)
    cl = ClosedLoopParams(alpha, beta, sys.h)
    cert = f"alpha = {alpha:.9g} <= S + 1/h = {bound:.9g}"
    if abs((t.u - alpha) * h + 1.0) <= MARGINAL_TOL:
        cert += "; marginal: double rightmost root"
    return AssignmentResult(AssignmentMode.REAL_BOTH, gains, cl, t.S, True, cert)


def assign_input_delay(sys, S, cond_tol=COND_TOL_DEFAULT):
    """Place the target for a plant driven through a delayed input.

    The loop gives alpha = a, beta = b*k, so the feasibility conditions
    match the delay-only mode and k = (S - a)*e^{S h}/b.
    """
    if not sys.input_delay:
        raise DomainError("assign_input_delay applies to input-delay plants only")
    t = as_target(S)
    value, cert = _delay_only_value(sys, t, cond_tol, "assign_input_delay")
    gains = Gains(k=value / sys.b, k1d=0.0)
    cl = ClosedLoopParams(sys.a, value, sys.h)
    return AssignmentResult(AssignmentMode.INPUT_DELAY, gains, cl, t.S, True, cert)


@dataclass(frozen=True)
class ModeCheck:
    mode: AssignmentMode
    applicable: bool
    feasible: bool
    detail: str
    residual: float = None
    alpha_interval: tuple = None


@dataclass(frozen=True)
class FeasibilityReport:
    target: complex
    checks: tuple

    def feasible_modes(self):
        return tuple(c.mode for c in self.checks if c.applicable and c.feasible)


def _try(fn, *args, **kwargs):
    try:
        res = fn(*args, **kwargs)
    except (ConditionViolated, NotAssignableAsRightmost, AlphaOutOfRange) as exc:
        residual = getattr(exc, "residual", None)
        if residual is None:
            residual = getattr(exc, "margin", None)
        return False, str(exc), residual
    return res.feasible, res.certificate, None


def feasibility_report(sys, S, cond_tol=COND_TOL_DEFAULT):
    """Check every design mode against one target.

    Modes that do not apply to the plant form or target type are
    listed with applicable=False; the rest carry the same condition
    residuals the assign functions would raise or certify.
    """
    t = as_target(S)
    checks = []

    def add(mode, applicable, feasible=False, detail="", residual=None, alpha_interval=None):
        checks.append(ModeCheck(mode, applicable, feasible, detail, residual, alpha_interval))

    real = t.v == 0.0
    if sys.input_delay:
        for mode in (AssignmentMode.BOTH_GAINS, AssignmentMode.DELAY_ONLY,
                     AssignmentMode.CURRENT_ONLY, AssignmentMode.REAL_BOTH):
            add(mode, False, detail="plant is input-delay")
        ok, detail, residual = _try(assign_input_delay, sys, t, cond_tol)
        add(AssignmentMode.INPUT_DELAY, True, ok, detail, residual)
        return FeasibilityReport(target=t.S, checks=tuple(checks))

    add(AssignmentMode.INPUT_DELAY, False, detail="plant is not input-delay")
    if real:
        add(AssignmentMode.BOTH_GAINS, False, detail="target is real; covered by real_both")
        bound = t.u + 1.0 / sys.h
        add(AssignmentMode.REAL_BOTH, True, True,
            f"feasible for any alpha <= S + 1/h = {bound:.9g}",
            alpha_interval=(-math.inf, bound))
    else:
        add(AssignmentMode.REAL_BOTH, False, detail="target is complex; covered by both_gains")
        ok, detail, residual = _try(assign_both, sys, t)
        add(AssignmentMode.BOTH_GAINS, True, ok, detail, residual)
    ok, detail, residual = _try(assign_delay_only, sys, t, cond_tol)
    add(AssignmentMode.DELAY_ONLY, True, ok, detail, residual)
    ok, detail, residual = _try(assign_current_only, sys, t, cond_tol)
    add(AssignmentMode.CURRENT_ONLY, True, ok, detail, residual)
    return FeasibilityReport(target=t.S, checks=tuple(checks))
