"""Characteristic spectra of scalar delay systems.

The system dx/dt = alpha x(t) + beta x(t-h) has infinitely many
characteristic roots; branch k of Lambert W picks out exactly one
(or one conjugate pair).  Run with: python demos/spectrum_stability.py
"""

from delayw import ClosedLoopParams, is_stable, spectrum

SYSTEMS = [
    ClosedLoopParams(alpha=1.0, beta=-1.0, h=1.0),
    ClosedLoopParams(alpha=-1.0, beta=-2.0, h=1.0),
    ClosedLoopParams(alpha=-1.0, beta=-1.0, h=1.0),
]

# 1. Print the first few branches of each spectrum, rightmost first.
for cl in SYSTEMS:
    sp = spectrum(cl, 3)
    stable, margin = is_stable(cl)
    print(f"alpha={cl.alpha:+g} beta={cl.beta:+g} h={cl.h:g}   "
          f"stable={stable}  margin={margin:+.6f}")
    for root in sp.roots:
        tag = f" x{root.multiplicity}" if root.multiplicity > 1 else ""
        print(f"   branch {root.branch:+d}: {root.s: .6f}{tag}")
    print()

# 2. The first system sits exactly on a branch-point coalescence:
#    beta*h*exp(-alpha*h) = -1/e, so branches 0 and -1 merge into one
#    double root at alpha - 1/h = 0.  It is reported once with
#    multiplicity 2, and it makes the system marginally unstable.
sp = spectrum(SYSTEMS[0], 3)
double = [r for r in sp.roots if r.multiplicity == 2]
print(f"double root of the first system: {double[0].s}  "
       f"(multiplicity {double[0].multiplicity})")

# 3. The rightmost root always lives on branch 0; deeper branches only
#    march further left.  That is what makes a finite stability test
#    possible for an infinite spectrum.
cl = SYSTEMS[1]
sp = spectrum(cl, 6)
res = sorted({r.s.real for r in sp.roots}, reverse=True)
print()
print("distinct real parts for alpha=-1, beta=-2:", ["%.4f" % x for x in res])
print(f"rightmost = {sp.rightmost:.6f}")

# 4. A delay-free loop (beta = 0) collapses to the single root alpha.
free = ClosedLoopParams(alpha=-1.0, beta=0.0, h=1.0)
print()
print(f"beta=0 spectrum: {[r.s for r in spectrum(free, 5).roots]}")
