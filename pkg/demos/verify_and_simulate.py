"""Two independent ways to distrust the spectrum.

The Lambert W route could be wrong in ways that are hard to see from
inside, so the package ships two cross-checks that never call it:
an argument-principle root counter and a time-domain integrator.
Run with: python demos/verify_and_simulate.py
"""

import csv
import io

from delayw import (
    ClosedLoopParams,
    ConstantHistory,
    InitialData,
    cross_validate,
    estimate_dominant_eig_detailed,
    simulate,
    spectrum,
)

cl = ClosedLoopParams(alpha=-1.0, beta=-2.0, h=1.0)

# 1. Oracle cross-check.  find_roots counts and locates roots inside a
#    rectangle purely from winding numbers of the characteristic
#    function; cross_validate builds the rectangle around the claimed
#    spectrum and matches the two root sets pairwise.
cv = cross_validate(cl, 3)
print(f"spectrum roots: {cv.spectrum_count}   oracle roots: {cv.oracle_count}")
print(f"worst matched distance: {cv.max_distance:.2e}")
print(f"search rect: Re [{cv.rect.re_min:.3f}, {cv.rect.re_max:.3f}] "
      f"Im [{cv.rect.im_min:.3f}, {cv.rect.im_max:.3f}]")

# 2. The coalescent case is the sharpest test: the oracle must count
#    the double root at 0 twice while the spectrum lists it once with
#    multiplicity 2.
cv2 = cross_validate(ClosedLoopParams(1.0, -1.0, 1.0), 3)
print(f"double-root system: counts {cv2.spectrum_count} == {cv2.oracle_count}, "
      f"distance {cv2.max_distance:.2e}")

# 3. Time-domain confirmation.  Integrate the loop by the method of
#    steps and fit the dominant decay/oscillation of the tail; the fit
#    should land on the predicted rightmost root.
predicted = spectrum(cl, 0).rightmost
traj = simulate(cl, InitialData(1.0, ConstantHistory(1.0)), 40.0)
est = estimate_dominant_eig_detailed(traj)
print()
print(f"predicted rightmost: {predicted:.6f}")
print(f"estimated from data: {est.value:.6f}  ({est.kind}, "
      f"{est.n_crossings} zero crossings, fit residual {est.fit_residual:.1e})")
print(f"relative deviation:  {abs(est.value - predicted) / abs(predicted):.2e}")

# 4. Trajectories export as plot-ready CSV (t, x).
buf = io.StringIO()
writer = csv.writer(buf)
writer.writerow(["t", "x"])
for t, x in zip(traj.times[:5], traj.values[:5]):
    writer.writerow([f"{t:.6f}", f"{x:.9f}"])
print()
print("first rows of the trajectory table:")
print(buf.getvalue())
