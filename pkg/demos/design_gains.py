"""Placing the rightmost eigenvalue by state feedback.

Plant: dx/dt = a x(t) + a1d x(t-h) + b u(t), controller
u = k x(t) + k1d x(t-h).  Run with: python demos/design_gains.py
"""

import math

from delayw import (
    NotAssignableAsRightmost,
    SystemParams,
    assign_both,
    assign_delay_only,
    assign_real_both,
    spectrum,
)

plant = SystemParams(a=1.0, a1d=-1.0, b=1.0, h=1.0)

# 1. Complex target with both gains free.  The design is exact: the
#    rightmost root of the resulting loop IS the target, not an
#    approximation to it.
S = complex(-0.092484, 1.9973)
r = assign_both(plant, S)
print(f"target {S}")
print(f"  gains: k={r.gains.k:.6f}  k1d={r.gains.k1d:.6f}")
print(f"  closed loop: alpha={r.closed_loop.alpha:.6f} "
      f"beta={r.closed_loop.beta:.6f}")
got = spectrum(r.closed_loop, 2).rightmost
print(f"  achieved rightmost: {got:.10f}   |error| = {abs(got - S):.2e}")

# 2. Real target.  The designer zeroes the delayed coupling, so the
#    loop degenerates to a pure exponential at exactly S.
r2 = assign_real_both(plant, -1.0)
print()
print(f"target -1 (real): k={r2.gains.k:g} k1d={r2.gains.k1d:g} "
      f"-> beta={r2.closed_loop.beta:g}")
print(f"  spectrum: {[root.s for root in spectrum(r2.closed_loop, 3).roots]}")

# 3. Single-gain mode.  With only the delayed gain adjustable the
#    reachable targets form a one-parameter family; asking for anything
#    else reports the violated compatibility condition.
S3 = complex(-0.5, 2.0)
try:
    assign_delay_only(plant, S3)
except Exception as exc:
    print()
    print(f"delay-only at {S3}: {type(exc).__name__}: {exc}")

# 4. The feasibility window.  A target with v*h >= pi cannot be made
#    rightmost: the same gains always produce a more dominant root.
#    The error carries the would-be design so this can be inspected.
S4 = complex(-1.0, 4.0)
print()
try:
    assign_both(plant, S4)
except NotAssignableAsRightmost as exc:
    print(f"target {S4} rejected; admissible Im window = "
          f"(0, {exc.window[1]:.6f})")
    rm = spectrum(exc.closed_loop, 1).rightmost
    print(f"  would-be gains {exc.gains} give rightmost {rm:.6f}, "
          f"which lies {rm.real - S4.real:.3f} to the RIGHT of the target")

# 5. Sweep the window edge: targets just inside pi/h stay exact.
print()
for f in (0.5, 0.9, 0.99):
    v = f * math.pi / plant.h
    S5 = complex(-0.3, v)
    r5 = assign_both(plant, S5)
    got = spectrum(r5.closed_loop, 2).rightmost
    print(f"v*h = {f:.2f}*pi: |achieved - target| = {abs(got - S5):.2e}")
