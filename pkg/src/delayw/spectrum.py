"""Characteristic spectrum of the scalar single-delay system.

The closed loop x'(t) = alpha*x(t) + beta*x(t-h) has characteristic
function f(s) = s - alpha - beta*e^{-s h}, whose roots are

    s_k = alpha + W_k(beta*h*e^{-alpha*h}) / h

one per Lambert W branch.  The principal branch gives the rightmost
root, so stability reduces to the sign of Re s_0.
"""

import cmath
import math
from dataclasses import dataclass, field

from .errors import InvalidGain, NonFiniteInput, DomainError
from .lambertw import BRANCH_POINT_Z, K_MAX_DEFAULT, lambert_w

__all__ = [
    "SystemParams",
    "Gains",
    "ClosedLoopParams",
    "SpectrumRoot",
    "Spectrum",
    "close_loop",
    "char_residual",
    "spectrum",
    "is_stable",
]

# |beta*h*e^{-alpha h} + 1/e| below which branches 0 and -1 are treated
# as coalesced into one double root.
COALESCENCE_TOL = 1e-12


def _require_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise NonFiniteInput(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SystemParams:
    """Open-loop plant x'(t) = a*x(t) + a1d*x(t-h) + b*u(t).

    With ``input_delay=True`` the plant is x'(t) = a*x(t) + b*u(t-h)
    instead; the delayed-state coefficient a1d must then be zero.
    """

    a: float
    a1d: float
    b: float
    h: float
    input_delay: bool = False

    def __post_init__(self):
        _require_finite(a=self.a, a1d=self.a1d, b=self.b, h=self.h)
        if self.h <= 0:
            raise DomainError(f"delay h must be positive, got {self.h}")
        if self.b == 0:
            raise DomainError("input gain b must be nonzero")
        if self.input_delay and self.a1d != 0:
            raise DomainError("an input-delay plant has no delayed-state term; a1d must be 0")


@dataclass(frozen=True)
class Gains:
    """Feedback law u(t) = k*x(t) + k1d*x(t-h)."""

    k: float
    k1d: float = 0.0

    def __post_init__(self):
        _require_finite(k=self.k, k1d=self.k1d)


@dataclass(frozen=True)
class ClosedLoopParams:
    """Closed loop x'(t) = alpha*x(t) + beta*x(t-h)."""

    alpha: float
    beta: float
    h: float

    def __post_init__(self):
        _require_finite(alpha=self.alpha, beta=self.beta, h=self.h)
        if self.h <= 0:
            raise DomainError(f"delay h must be positive, got {self.h}")

    @property
    def w_argument(self):
        """beta*h*e^{-alpha*h}, the argument handed to Lambert W."""
        return self.beta * self.h * math.exp(-self.alpha * self.h)


@dataclass(frozen=True)
class SpectrumRoot:
    branch: int
    s: complex
    multiplicity: int = 1


@dataclass(frozen=True)
class Spectrum:
    """Branch-labelled characteristic roots, rightmost first."""

    roots: tuple = field(default_factory=tuple)
    rightmost: complex = complex(0.0)

    @property
    def total_multiplicity(self):
        return sum(r.multiplicity for r in self.roots)


def close_loop(sys, gains):
    """Combine plant and feedback law into closed-loop coefficients.

    For the direct-input plant: alpha = a + b*k, beta = a1d + b*k1d.
    For the input-delay plant the gain acts on the delayed channel:
    alpha = a, beta = b*k, and k1d must be zero.
    """
    if sys.input_delay:
        if gains.k1d != 0:
            raise InvalidGain("input-delay systems admit only the current-state gain; k1d must be 0")
        return ClosedLoopParams(alpha=sys.a, beta=sys.b * gains.k, h=sys.h)
    return ClosedLoopParams(alpha=sys.a + sys.b * gains.k, beta=sys.a1d + sys.b * gains.k1d, h=sys.h)


def char_residual(cl, s):
    """Value of the characteristic function s - alpha - beta*e^{-s h}.

    Zero exactly at the characteristic roots.
    """
    s = complex(s)
    return s - cl.alpha - cl.beta * cmath.exp(-s * cl.h)


def _root(cl, k, z, tol):
    w = lambert_w(k, z, tol=tol)
    return cl.alpha + w.w / cl.h


def spectrum(cl, n_branches, k_max=K_MAX_DEFAULT, tol=1e-14):
    """Enumerate characteristic roots branch by branch.

    Parameters
    ----------
    cl : ClosedLoopParams
    n_branches : int
        Highest branch index to include.  The root set is kept closed
        under conjugation, so for negative real W arguments the partner
        of branch k is branch -k-1 and the listing extends to -(n+1).
    k_max : int, optional
        Branch bound forwarded to the W kernel.

    Returns
    -------
    Spectrum
        Roots sorted by descending real part (ties by ascending
        imaginary part).  The rightmost root always carries branch 0;
        when the W argument sits within COALESCENCE_TOL of -1/e the
        coalesced branch-0/-1 pair is reported once with multiplicity 2.
    """
    if n_branches < 0:
        raise DomainError(f"n_branches must be >= 0, got {n_branches}")
    if n_branches > k_max:
        raise DomainError(f"n_branches = {n_branches} exceeds k_max = {k_max}")
    n = int(n_branches)
    z = cl.w_argument
    roots = []
    if cl.beta == 0.0:
        # delay term vanishes; W_k(0) exists only for k = 0
        roots.append(SpectrumRoot(0, complex(cl.alpha, 0.0), 1))
        rightmost = complex(cl.alpha, 0.0)
    elif z > 0.0:
        s0 = _root(cl, 0, z, tol)
        roots.append(SpectrumRoot(0, s0, 1))
        rightmost = s0
        for k in range(1, n + 1):
            sk = _root(cl, k, z, tol)
            roots.append(SpectrumRoot(k, sk, 1))
            roots.append(SpectrumRoot(-k, sk.conjugate(), 1))
    elif abs(z - BRANCH_POINT_Z) <= COALESCENCE_TOL:
        # the classification pins z to the branch point, where W = -1
        # exactly; evaluating W_0(z) here instead would leak a spurious
        # imaginary part of order sqrt(|z + 1/e|)
        s0 = complex(cl.alpha - 1.0 / cl.h, 0.0)
        roots.append(SpectrumRoot(0, s0, 2))
        rightmost = s0
        for k in range(1, n + 1):
            sk = _root(cl, k, z, tol)
            roots.append(SpectrumRoot(k, sk, 1))
            roots.append(SpectrumRoot(-k - 1, sk.conjugate(), 1))
    elif z < BRANCH_POINT_Z:
        # on the cut: branch k pairs with branch -k-1
        s0 = _root(cl, 0, z, tol)
        roots.append(SpectrumRoot(0, s0, 1))
        roots.append(SpectrumRoot(-1, s0.conjugate(), 1))
        rightmost = s0
        for k in range(1, n + 1):
            sk = _root(cl, k, z, tol)
            roots.append(SpectrumRoot(k, sk, 1))
            roots.append(SpectrumRoot(-k - 1, sk.conjugate(), 1))
    else:
        # -1/e < z < 0: branches 0 and -1 are real, the rest pair as on the cut
        s0 = _root(cl, 0, z, tol)
        roots.append(SpectrumRoot(0, s0, 1))
        roots.append(SpectrumRoot(-1, _root(cl, -1, z, tol), 1))
        rightmost = s0
        for k in range(1, n + 1):
            sk = _root(cl, k, z, tol)
            roots.append(SpectrumRoot(k, sk, 1))
            roots.append(SpectrumRoot(-k - 1, sk.conjugate(), 1))
    roots.sort(key=lambda r: (-r.s.real, r.s.imag))
    return Spectrum(roots=tuple(roots), rightmost=rightmost)


def is_stable(cl):
    """Stability verdict from the rightmost root.

    Returns
    -------
    (stable, margin) : (bool, float)
        margin is Re s_0; the loop is exponentially stable iff it is
        negative.
    """
    if cl.beta == 0.0:
        margin = cl.alpha
    else:
        margin = cl.alpha + lambert_w(0, cl.w_argument).w.real / cl.h
    return margin < 0.0, margin
