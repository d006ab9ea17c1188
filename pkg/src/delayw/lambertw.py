"""Multi-branch complex Lambert W function.

Evaluates W_k(z), the k-th branch of the inverse of w -> w*e^w, for any
integer branch index, including points on and near the branch cut
(-inf, -1/e) and the branch point -1/e.  Real arguments on the cut are
evaluated as the limit from above (counter-clockwise continuity), so a
-0.0 imaginary part is treated as +0.0.

The kernel is Halley's method on f(w) = w*e^w - z, started from one of
three seeds: a square-root series about the branch point, a rational
fit of the principal branch near the origin, or the standard
logarithmic asymptotic expansion.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import BranchOutOfRange, DomainError, NoConvergence, NonFiniteInput

__all__ = [
    "K_MAX_DEFAULT",
    "BRANCH_POINT_Z",
    "WValue",
    "lambert_w",
    "lambert_w_real",
    "w0_boundary_point",
    "on_w0_boundary",
]

K_MAX_DEFAULT = 1024

# z at which branches 0 and -1 meet, w = -1 there.
BRANCH_POINT_Z = -math.exp(-1.0)

_E = math.e
_EPS = 2.220446049250313e-16
_TWO_PI = 2.0 * math.pi
_MAX_ITER = 60

# Coefficients of w = -1 + p - p^2/3 + ... about the branch point,
# p = sqrt(2*(e*z + 1)).
_BP_SERIES = (
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
)

# |p| below which the branch-point series alone is full double precision
# (next omitted term is ~0.03*|p|^6); Halley is skipped there because the
# vanishing derivative at the branch point makes its steps pure noise.
_BP_DIRECT = 5e-3

# Radius around -1/e inside which the series seeds the iteration.
_BP_SEED_RADIUS = 0.3

# e as a double-double pair: math.e plus the digits rounding dropped.
_E_LO = 1.4456468917292502e-16

_SPLITTER = 134217729.0  # 2^27 + 1, Dekker's splitting constant


def _two_prod(a, b):
    """a*b as the rounded product plus its exact rounding error."""
    p = a * b
    ca = _SPLITTER * a
    a_hi = ca - (ca - a)
    a_lo = a - a_hi
    cb = _SPLITTER * b
    b_hi = cb - (cb - b)
    b_lo = b - b_hi
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, err


def _ez_plus_1_real(x):
    """e*x + 1, compensated for the cancellation at x = -1/e.

    The naive product keeps only half the digits of the difference
    there, and the square root in the branch-point series promotes that
    to ~1e-8 of absolute error in w.  Splitting the product recovers
    its rounding error and _E_LO restores the digits of e itself.  The
    double closest to -1/e sits on the far side of the true branch
    point by less than one ulp; the clamp keeps the real branches
    pinned at w = -1 there instead of leaking a ~8e-9 imaginary part.
    """
    prod, err = _two_prod(_E, x)
    d = (prod + 1.0) + (err + _E_LO * x)
    return 0.0 if d < 0.0 else d


def _ez_plus_1(z):
    """Complex e*z + 1 with the real part compensated."""
    if z.imag == 0.0 and z.real == BRANCH_POINT_Z:
        return complex(0.0, 0.0)
    prod, err = _two_prod(_E, z.real)
    re = (prod + 1.0) + (err + _E_LO * z.real)
    return complex(re, _E * z.imag + _E_LO * z.imag)


@dataclass(frozen=True)
class WValue:
    """Result of a Lambert W evaluation.

    Attributes
    ----------
    w : complex
        The branch value, satisfying ``w*exp(w) == z`` to ``residual``.
    residual : float
        ``abs(w*exp(w) - z)`` at the returned point.
    iterations : int
        Halley iterations consumed (0 when a closed form or direct
        series evaluation sufficed).
    """

    w: complex
    residual: float
    iterations: int


def _bp_series(p):
    """Branch-point expansion w(p); exact at p = 0."""
    s = _BP_SERIES
    return s[0] + p * (s[1] + p * (s[2] + p * (s[3] + p * (s[4] + p * s[5]))))


def _pade0(z):
    """Rational fit of W_0 about the origin, degree (3, 2).

    Matches the Taylor series z - z^2 + 3/2 z^3 - ... through z^5; good
    to ~0.03 as a seed for |z| <= 2.
    """
    return z * (60.0 + z * (114.0 + 17.0 * z)) / (60.0 + z * (174.0 + 101.0 * z))


def _asymptotic(z, k):
    """Log-based seed valid for large |z| and for every branch k != 0."""
    l1 = cmath.log(z) + _TWO_PI * k * 1j
    l2 = cmath.log(l1)
    return l1 - l2 + l2 / l1


# exp(w) leaves the normal double range below this; Halley's f and f'
# turn into subnormal noise (or exact zeros) and the quotient is garbage
_LOG_DOMAIN_RE = -705.0


def _newton_log(z, w):
    """Newton on g(w) = w + Log(w) - (Log(z) + 2*pi*i*m), exponential-free.

    Used when the seed lies so far left that exp(w) underflows.  Any root
    of g satisfies w*e^w = z exactly; the integer m is pinned by the
    seed's band.  The defining residual is |z|*|exp(g) - 1|, reported to
    first order as |z|*|g| (far below any tolerance here, since |z| is
    tiny by construction).
    """
    lz = cmath.log(z)
    m = round((w.imag + cmath.phase(w) - lz.imag) / _TWO_PI)
    target = lz + _TWO_PI * m * 1j
    g = w + cmath.log(w) - target
    it = 0
    for it in range(1, _MAX_ITER + 1):
        if abs(g) <= 4.0 * _EPS * abs(w):
            break
        w = w - w * g / (w + 1.0)
        g = w + cmath.log(w) - target
    return w, abs(z) * abs(g), it


def _newton_log_real(x, w):
    """Real-line variant of _newton_log, for W_-1 as x -> 0-."""
    target = math.log(-x)
    g = w + math.log(-w) - target
    it = 0
    for it in range(1, _MAX_ITER + 1):
        if abs(g) <= 4.0 * _EPS * abs(w):
            break
        w = w - w * g / (w + 1.0)
        g = w + math.log(-w) - target
    return w, abs(x) * abs(g), it


def _halley(z, w, res_tol, rtol, exp_fn, abs_fn):
    """Polish w with Halley's method on f(w) = w*e^w - z.

    Both stopping tolerances carry conditioning floors.  The step cannot
    shrink below the noise of f divided by |f'| (which vanishes at the
    branch point), and the residual cannot shrink below |f'| times the
    quantization of w itself (which grows with |w|, i.e. with |k|);
    demanding less than either would spin until the iteration cap.
    """
    step_prev = math.inf
    for it in range(_MAX_ITER):
        ew = exp_fn(w)
        f = w * ew - z
        res = abs_fn(f)
        wp1 = w + 1.0
        fp = wp1 * ew
        afp = abs_fn(fp)
        step_tol = rtol * max(1.0, abs_fn(w)) + 8.0 * _EPS * max(1.0, abs_fn(z)) / max(afp, 1e-300)
        res_floor = 2.0 * _EPS * (max(1.0, abs_fn(w)) * afp + 2.0 * max(1.0, abs_fn(z)))
        if res <= res_tol + res_floor and step_prev <= step_tol:
            return w, res, it
        if fp == 0.0:
            # sitting exactly on the singular derivative; nudge off it
            w = w + 1e-7
            step_prev = math.inf
            continue
        dw = f / (fp - f * (w + 2.0) / (2.0 * wp1))
        w = w - dw
        step_prev = abs_fn(dw)
    raise NoConvergence(f"Halley iteration did not converge for z={z!r} (last step {step_prev:.3e})")


def _eval_complex(k, z, res_tol, rtol):
    """Seed selection and iteration for the complex kernel."""
    # branch-point neighbourhood, branches 0 and +-1 only
    if abs(z - BRANCH_POINT_Z) <= _BP_SEED_RADIUS and k in (0, 1, -1):
        p = cmath.sqrt(2.0 * _ez_plus_1(z))
        if k == 0:
            seed = _bp_series(p)
        elif (k == -1 and z.imag >= 0.0) or (k == 1 and z.imag < 0.0):
            seed = _bp_series(-p)
            p = -p
        else:
            seed = None
        if seed is not None:
            if abs(p) <= _BP_DIRECT:
                res = abs(seed * cmath.exp(seed) - z)
                return seed, res, 0
            return _halley(z, seed, res_tol, rtol, cmath.exp, abs)
    if k == 0:
        if abs(z) <= 2.0 and z.real >= BRANCH_POINT_Z:
            seed = _pade0(z)
        else:
            seed = _asymptotic(z, 0)
    else:
        seed = _asymptotic(z, k)
    if seed.real < _LOG_DOMAIN_RE:
        return _newton_log(z, seed)
    return _halley(z, seed, res_tol, rtol, cmath.exp, abs)


def _real_w0(x, res_tol, rtol):
    """W_0 restricted to its real domain [-1/e, inf)."""
    if x == 0.0:
        return 0.0, 0.0, 0
    if x - BRANCH_POINT_Z <= _BP_SEED_RADIUS:
        p = math.sqrt(2.0 * _ez_plus_1_real(x))
        seed = _bp_series(p)
        if p <= _BP_DIRECT:
            return seed, abs(seed * math.exp(seed) - x), 0
    elif x <= 2.0:
        seed = _pade0(x)
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        seed = l1 - l2 + l2 / l1
    return _halley(x, seed, res_tol, rtol, math.exp, abs)


def _real_wm1(x, res_tol, rtol):
    """W_{-1} restricted to its real domain [-1/e, 0)."""
    if x - BRANCH_POINT_Z <= _BP_SEED_RADIUS:
        p = math.sqrt(2.0 * _ez_plus_1_real(x))
        seed = _bp_series(-p)
        if p <= _BP_DIRECT:
            return seed, abs(seed * math.exp(seed) - x), 0
    else:
        # w = log(-x) - log(-log(-x)) + ..., exact as x -> 0-
        l1 = math.log(-x)
        seed = l1 - math.log(-l1)
        if seed < _LOG_DOMAIN_RE:
            return _newton_log_real(x, seed)
    return _halley(x, seed, res_tol, rtol, math.exp, abs)


def lambert_w(k, z, tol=1e-14, k_max=K_MAX_DEFAULT):
    """Evaluate branch k of the Lambert W function at z.

    Parameters
    ----------
    k : int
        Branch index, |k| <= k_max.
    z : complex
        Argument.  A real part below -1/e with imaginary part +-0.0 is
        evaluated on the branch cut as the limit from above.
    tol : float, optional
        Relative residual tolerance; the returned value satisfies
        ``abs(w*exp(w) - z) <= tol*max(1, abs(z))`` (plus a 1e-300
        absolute floor).
    k_max : int, optional
        Bound on |k|; branches beyond it are rejected rather than
        approximated.

    Returns
    -------
    WValue
        Branch value with its residual and iteration count.

    Raises
    ------
    BranchOutOfRange
        If |k| > k_max.
    NonFiniteInput
        If z is NaN or infinite.
    DomainError
        If z == 0 with k != 0 (every branch but the principal one
        diverges at the origin).
    NoConvergence
        If the iteration cap is hit; indicates a kernel bug.
    """
    if not isinstance(k, int):
        raise DomainError(f"branch index must be an integer, got {k!r}")
    if abs(k) > k_max:
        raise BranchOutOfRange(f"|k| = {abs(k)} exceeds k_max = {k_max}")
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteInput(f"z must be finite, got {z!r}")
    if z == 0:
        if k == 0:
            return WValue(complex(0.0, 0.0), 0.0, 0)
        raise DomainError("W_k(0) diverges for k != 0")
    if z.imag == 0.0:
        z = complex(z.real, 0.0)  # -0.0 -> +0.0: cut values are the limit from above
        x = z.real
        if k == 0 and x >= BRANCH_POINT_Z:
            w, res, it = _real_w0(x, tol * max(1.0, abs(x)) + 1e-300, tol)
            return WValue(complex(w, 0.0), res, it)
        if k == -1 and BRANCH_POINT_Z <= x < 0.0:
            w, res, it = _real_wm1(x, tol * max(1.0, abs(x)) + 1e-300, tol)
            return WValue(complex(w, 0.0), res, it)
    res_tol = tol * max(1.0, abs(z)) + 1e-300
    w, res, it = _eval_complex(k, z, res_tol, tol)
    return WValue(complex(w), res, it)


def lambert_w_real(branch, x):
    """Real-valued W on the two branches that are real on part of the axis.

    Parameters
    ----------
    branch : {0, -1}
        0 needs x >= -1/e; -1 needs -1/e <= x < 0.
    x : float

    Returns
    -------
    float
        W_0(x) >= -1, monotone increasing, or W_{-1}(x) <= -1, monotone
        decreasing, respectively.
    """
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteInput(f"x must be finite, got {x!r}")
    res_tol = 1e-14 * max(1.0, abs(x)) + 1e-300
    if branch == 0:
        if x < BRANCH_POINT_Z:
            raise DomainError(f"W_0 is real only for x >= -1/e, got {x}")
        return _real_w0(x, res_tol, 1e-14)[0]
    if branch == -1:
        if not BRANCH_POINT_Z <= x < 0.0:
            raise DomainError(f"W_-1 is real only for -1/e <= x < 0, got {x}")
        return _real_wm1(x, res_tol, 1e-14)[0]
    raise DomainError(f"real evaluation exists only for branches 0 and -1, got {branch}")


def w0_boundary_point(eta):
    """Point of the upper boundary curve of the principal branch's range.

    The image of the branch cut under W_0 is the curve
    ``{-eta*cot(eta) + i*eta : 0 < eta < pi}``; this returns the point at
    parameter eta.
    """
    eta = float(eta)
    if not 0.0 < eta < math.pi:
        raise DomainError(f"eta must lie in (0, pi), got {eta}")
    return complex(-eta * math.cos(eta) / math.sin(eta), eta)


def on_w0_boundary(w, tol):
    """True iff w lies on the upper boundary of the W_0 range, within tol.

    The test is Im w in (0, pi) and |Re w + Im w * cot(Im w)| <= tol.
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    w = complex(w)
    eta = w.imag
    if not 0.0 < eta < math.pi:
        return False
    return abs(w.real + eta * math.cos(eta) / math.sin(eta)) <= tol
