"""Sweep the contrast kappa on the symmetric pair and watch the profiles.

For each kappa prints the signed area, the caliper width ratio and whether
the overlap check fires. Contrasts near 1 give large, interpenetrating
(and here clockwise, hence non-univalent) contours.
"""
import warnings

from uniform_inclusions import Circle, LoadingParameters, MapGauge, NormalizationNotice, ProblemSetup, solve, validate_domain
from uniform_inclusions.mapping import NonUnivalentWarning, detect_overlap, sample_contours, width_ratio

with warnings.catch_warnings():
    warnings.simplefilter("ignore", NormalizationNotice)
    domain = validate_domain([Circle(-1.5, 1), Circle(1.5, 1)])

print("kappa  area        width ratio  overlap  univalent")
for kappa in (0.3, 0.5, 0.9, 1.1, 2, 5, 10, 50):
    setup = ProblemSetup(domain, LoadingParameters(2, 1, [kappa, kappa]), MapGauge(mode="antisymmetric"), base_point=0)
    contours = sample_contours(solve(setup))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonUnivalentWarning)
        rep = detect_overlap(contours)
    c = contours[1]
    print(f"{kappa:5g}  {c.signed_area:+10.4f}  {width_ratio(c):11.4f}  {rep.flag!s:7}  {rep.univalent}")
