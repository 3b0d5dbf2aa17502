"""Two inclusions placed symmetrically, with residuals and the series convergence.

Shows how the boundary residuals fall as the group truncation deepens and
that the two profiles are mirror images of each other.
"""
import warnings

import numpy as np

from uniform_inclusions import Circle, LoadingParameters, MapGauge, NormalizationNotice, ProblemSetup, solve, validate_domain
from uniform_inclusions.mapping import hausdorff_distance, residual_report, sample_contours
from uniform_inclusions.schottky import convergence_report

with warnings.catch_warnings():
    warnings.simplefilter("ignore", NormalizationNotice)
    domain = validate_domain([Circle(-1.5, 1), Circle(1.5, 1)])

loading = LoadingParameters(2, 1, [2, 2])
print("level  elements  imF       BC        automorphicity  ratio")
for level in range(1, 6):
    setup = ProblemSetup(domain, loading, MapGauge(mode="antisymmetric"), base_point=0, max_level=level)
    sol = solve(setup)
    rep = residual_report(sol)
    ratio = convergence_report(setup.group).ratio
    ratio = "-" if ratio is None else f"{ratio:.3f}"
    print(f"{level:5d}  {len(setup.group):8d}  {rep.imF:.2e}  {rep.physical_bc:.2e}  {rep.automorphicity:.2e}        {ratio}")

contours = sample_contours(sol, 256)
mirrored = -np.conj(contours[0].z)
print(f"a = {sol.a}, d~ = {sol.d_tilde}")
print(f"Hausdorff distance between contour 1 and the mirrored contour 0: {hausdorff_distance(mirrored, contours[1].z):.2e}")
