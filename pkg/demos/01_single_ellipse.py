"""One inclusion: the computed boundary against the closed-form ellipse.

With a single circle the group is trivial and the uniformly stressed
inclusion is an ellipse. Run with ``python3 demos/01_single_ellipse.py``.
"""
import warnings

from uniform_inclusions import Circle, LoadingParameters, MapGauge, NormalizationNotice, ProblemSetup, solve, validate_domain
from uniform_inclusions.mapping import caliper_widths, ellipse_oracle, oracle_deviation, sample_contours

with warnings.catch_warnings():
    warnings.simplefilter("ignore", NormalizationNotice)
    domain = validate_domain([Circle(0, 1)])

for kappa, tau, tau_inf in [(2, 1.5, 1), (3, 1 + 0.5j, 0.4), (0.3, 2, -1j)]:
    setup = ProblemSetup(domain, LoadingParameters(tau, tau_inf, [kappa]), MapGauge(), quadrature_n=64)
    contour = sample_contours(solve(setup), 64)[0]
    oracle = ellipse_oracle(kappa, tau, tau_inf)
    wmin, wmax = caliper_widths(contour)
    print(f"kappa={kappa:<4} tau={tau!s:<9} tau_inf={tau_inf!s:<5} delta={oracle.delta:.4f}")
    print(f"    semi-axes {oracle.semi_axes[0]:.4f}, {oracle.semi_axes[1]:.4f}  widths {wmax:.4f}, {wmin:.4f}")
    print(f"    max deviation from the ellipse {oracle_deviation(contour, oracle):.2e}")
