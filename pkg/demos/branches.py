"""Tour of the multi-branch Lambert W evaluator.

Run with: python demos/branches.py
"""

import cmath
import math

from delayw import BRANCH_POINT_Z, lambert_w, lambert_w_real

# 1. The defining identity w * e^w = z holds on every branch.  The solver
#    reports its own residual, so we can print both sides.
z = complex(1.5, -0.7)
for k in (-2, -1, 0, 1, 2):
    r = lambert_w(k, z)
    print(f"W_{k:+d}({z}) = {r.w:.15g}   residual={r.residual:.2e}  "
          f"iterations={r.iterations}")

# 2. Branches stack vertically: Im W_k grows with k in steps of roughly
#    2*pi.  Only W_0 can ever be real for real arguments >= -1/e.
print()
print("imaginary parts at z = 1+0.5j:")
for k in range(-3, 4):
    w = lambert_w(k, complex(1.0, 0.5)).w
    print(f"  k={k:+d}  Im w = {w.imag: .6f}  (~{w.imag / math.pi: .3f} pi)")

# 3. The two real branches.  On [-1/e, 0) both W_0 and W_-1 are real;
#    they meet at the branch point z = -1/e where w = -1 exactly.
print()
x = -0.2
print(f"W_0({x})  = {lambert_w_real(0, x):.15g}")
print(f"W_-1({x}) = {lambert_w_real(-1, x):.15g}")
print(f"branch point z = {BRANCH_POINT_Z!r}")
print(f"W_0(bp)  = {lambert_w_real(0, BRANCH_POINT_Z)!r}")
print(f"W_-1(bp) = {lambert_w_real(-1, BRANCH_POINT_Z)!r}")

# 4. Conjugate symmetry: W_-k(conj z) == conj(W_k(z)) away from the
#    real axis.  The evaluator preserves this bit for bit.
print()
zq = complex(-0.9, 2.3)
w2 = lambert_w(2, zq).w
w2c = lambert_w(-2, zq.conjugate()).w
print(f"W_2({zq})          = {w2:.15g}")
print(f"conj W_-2(conj z)  = {w2c.conjugate():.15g}")

# 5. Crossing the cut (-inf, -1/e): the value jumps between branches,
#    and the cut itself belongs to the side approached from above.
print()
xc = -1.0
above = lambert_w(0, complex(xc, 1e-12)).w
below = lambert_w(0, complex(xc, -1e-12)).w
oncut = lambert_w(0, complex(xc, 0.0)).w
print(f"W_0 just above the cut: {above:.9f}")
print(f"W_0 on the cut:         {oncut:.9f}   (same side as above)")
print(f"W_0 just below the cut: {below:.9f}")

# 6. Identity round trip: W_0(x e^x) recovers x across the real range.
print()
worst = 0.0
for i in range(101):
    x = -1.0 + 11.0 * i / 100.0
    worst = max(worst, abs(lambert_w_real(0, x * math.exp(x)) - x))
print(f"max |W_0(x e^x) - x| on [-1, 10]: {worst:.2e}")
