"""Command line driver: JSON config in, contours/diagnostics/plot out.

Exit status is 0 on success, 2 when the contours overlap (the computation
itself is fine but the geometry is inadmissible) and 1 on any error,
including residuals above the configured hard ceiling.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .geometry import Circle, DomainError, NormalizationNotice, validate_domain
from .mapping import (
    DEFAULT_SAMPLES,
    MIN_SAMPLES,
    InclusionContour,
    NonUnivalentWarning,
    ResidualReport,
    ellipse_oracle,
    oracle_deviation,
    residual_report,
    sample_contours,
)
from .rh import GAUGE_MODES, LoadingParameters, MapGauge, ProblemSetup, solve
from .schottky import DEFAULT_MAX_LEVEL, convergence_report

__all__ = ["ConfigError", "RunConfig", "emit_contours", "emit_diagnostics", "emit_svg", "main", "run"]

log = logging.getLogger("uniform_inclusions")

EXIT_OK, EXIT_ERROR, EXIT_OVERLAP = 0, 1, 2
DEFAULT_CEILING = 1e-4


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is the 1-based source line when known."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = f"{source or 'config'}:{line}: " if line else (f"{source}: " if source else "")
        super().__init__(where + message)


# -- configuration ------------------------------------------------------------


def _complex(value, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{path}: expected a number or [re, im]")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class RunConfig:
    centers: tuple[complex, ...]
    radii: tuple[float, ...]
    tau: complex
    tau_inf: complex
    kappa: tuple[float, ...]
    c_minus1: complex = 1.0
    a0: float = 0.0
    d0_tilde: float = 0.0
    gauge_mode: str = "explicit"
    zeta_star: complex | None = None
    max_level: int = DEFAULT_MAX_LEVEL
    quadrature_N: int = 64
    samples_per_contour: int = DEFAULT_SAMPLES
    hard_residual_ceiling: float = DEFAULT_CEILING

    def __post_init__(self):
        if len(self.centers) != len(self.radii):
            raise ConfigError("circles: each circle needs a center and a radius")
        if len(self.kappa) != len(self.centers):
            raise ConfigError("loading.kappa: one value per circle is required")
        if self.gauge_mode not in GAUGE_MODES:
            raise ConfigError(f"gauge.gauge_mode: must be one of {', '.join(GAUGE_MODES)}")
        if self.max_level < 0:
            raise ConfigError("numerics.max_level: must be non-negative")
        if self.quadrature_N < 1:
            raise ConfigError("numerics.quadrature_N: must be positive")
        if self.samples_per_contour < MIN_SAMPLES:
            raise ConfigError(f"numerics.samples_per_contour: must be at least {MIN_SAMPLES}")
        if not self.hard_residual_ceiling > 0:
            raise ConfigError("numerics.hard_residual_ceiling: must be positive")

    @property
    def n(self) -> int:
        return len(self.centers)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("top level must be an object")
        unknown = set(data) - {"circles", "loading", "gauge", "numerics"}
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown section")
        circles = data.get("circles")
        if not isinstance(circles, list) or not circles:
            raise ConfigError("circles: expected a non-empty list")
        centers, radii = [], []
        for k, c in enumerate(circles):
            if not isinstance(c, dict) or "center" not in c or "radius" not in c:
                raise ConfigError(f"circles[{k}]: expected {{center, radius}}")
            centers.append(_complex(c["center"], f"circles[{k}].center"))
            r = c["radius"]
            if not isinstance(r, (int, float)) or isinstance(r, bool):
                raise ConfigError(f"circles[{k}].radius: expected a number")
            radii.append(float(r))
        loading = data.get("loading")
        if not isinstance(loading, dict):
            raise ConfigError("loading: expected an object")
        for key in ("tau", "tau_inf", "kappa"):
            if key not in loading:
                raise ConfigError(f"loading.{key}: missing")
        kappa = loading["kappa"]
        kappa = [kappa] * len(centers) if isinstance(kappa, (int, float)) else kappa
        if not isinstance(kappa, list) or not all(
            isinstance(k, (int, float)) and not isinstance(k, bool) for k in kappa
        ):
            raise ConfigError("loading.kappa: expected a list of numbers")
        gauge = data.get("gauge", {})
        numerics = data.get("numerics", {})
        if not isinstance(gauge, dict) or not isinstance(numerics, dict):
            raise ConfigError("gauge/numerics: expected objects")
        zs = gauge.get("zeta_star")
        try:
            cfg = cls(
                centers=tuple(centers),
                radii=tuple(radii),
                tau=_complex(loading["tau"], "loading.tau"),
                tau_inf=_complex(loading["tau_inf"], "loading.tau_inf"),
                kappa=tuple(float(k) for k in kappa),
                c_minus1=_complex(gauge.get("c_minus1", 1.0), "gauge.c_minus1"),
                a0=float(gauge.get("a0", 0.0)),
                d0_tilde=float(gauge.get("d0_tilde", 0.0)),
                gauge_mode=str(gauge.get("gauge_mode", "explicit")),
                zeta_star=None if zs is None else _complex(zs, "gauge.zeta_star"),
                max_level=int(numerics.get("max_level", DEFAULT_MAX_LEVEL)),
                quadrature_N=int(numerics.get("quadrature_N", 64)),
                samples_per_contour=int(numerics.get("samples_per_contour", DEFAULT_SAMPLES)),
                hard_residual_ceiling=float(numerics.get("hard_residual_ceiling", DEFAULT_CEILING)),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        """Re-check the invariants of the domain, loading and gauge types."""
        checks = (
            ("circles", lambda: self._domain()),
            ("loading", lambda: LoadingParameters(self.tau, self.tau_inf, self.kappa)),
            ("gauge", lambda: MapGauge(self.c_minus1, self.a0, self.d0_tilde, self.gauge_mode)),
            ("gauge.zeta_star", lambda: self.setup().context),
        )
        for key, check in checks:
            try:
                check()
            except (DomainError, ValueError) as exc:
                raise ConfigError(f"{key}: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "circles": [{"center": _pair(c), "radius": r} for c, r in zip(self.centers, self.radii)],
            "loading": {"tau": _pair(self.tau), "tau_inf": _pair(self.tau_inf), "kappa": list(self.kappa)},
            "gauge": {
                "c_minus1": _pair(self.c_minus1),
                "a0": self.a0,
                "d0_tilde": self.d0_tilde,
                "gauge_mode": self.gauge_mode,
                "zeta_star": None if self.zeta_star is None else _pair(self.zeta_star),
            },
            "numerics": {
                "max_level": self.max_level,
                "quadrature_N": self.quadrature_N,
                "samples_per_contour": self.samples_per_contour,
                "hard_residual_ceiling": self.hard_residual_ceiling,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str, source: str | None = None) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(exc.msg, exc.lineno, source) from exc
        try:
            return cls.from_dict(data)
        except ConfigError as exc:
            msg = str(exc)
            raise ConfigError(msg, _locate(text, msg), source) from exc

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", source=str(path)) from exc
        return cls.loads(text, str(path))

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def _domain(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NormalizationNotice)
            return validate_domain([Circle(c, r) for c, r in zip(self.centers, self.radii)])

    def setup(self) -> ProblemSetup:
        return ProblemSetup(
            self._domain(),
            LoadingParameters(self.tau, self.tau_inf, self.kappa),
            MapGauge(self.c_minus1, self.a0, self.d0_tilde, self.gauge_mode),
            base_point=self.zeta_star,
            max_level=self.max_level,
            quadrature_n=self.quadrature_N,
        )


def _locate(text: str, message: str) -> int | None:
    """Line of the innermost key named at the start of ``message``."""
    head = message.split(":", 1)[0]
    keys = [k.split("[", 1)[0] for k in head.split(".") if k]
    line = None
    pos = 0
    for key in keys:
        k = text.find(f'"{key}"', pos)
        if k < 0:
            break
        pos = k
        line = text.count("\n", 0, k) + 1
    return line


# -- emitters -------------------------------------------------------------------


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def emit_contours(contours: Sequence[InclusionContour], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["inclusion_index", "theta", "x", "y"])
        for c in contours:
            for th, z in zip(c.theta, c.z):
                w.writerow([c.index, _g17(th), _g17(z.real), _g17(z.imag)])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def emit_diagnostics(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(report), fh, indent=2)
        fh.write("\n")


def emit_svg(contours: Sequence[InclusionContour], circles: Sequence[Circle], path, size=600) -> None:
    """Contours as closed paths with the parametric circles dashed underneath."""
    pts = [c.z for c in contours] + [c.point(np.linspace(0, 2 * np.pi, 64)) for c in circles]
    allz = np.concatenate(pts) if pts else np.zeros(1, complex)
    lo = complex(allz.real.min(), allz.imag.min())
    span = max(np.ptp(allz.real), np.ptp(allz.imag), 1e-9) * 1.1
    pad = 0.05 * span
    s = size / span

    def tr(z):
        return (z.real - lo.real + pad) * s, (lo.imag + span - pad - z.imag) * s

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for c in circles:
        x, y = tr(c.center)
        out.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{c.radius * s:.3f}" fill="none" '
            'stroke="#888" stroke-dasharray="4 3"/>'
        )
    for c in contours:
        xy = [tr(z) for z in c.z]
        d = "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in xy) + " Z"
        out.append(f'<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")


# -- orchestration ----------------------------------------------------------------


@dataclass
class RunResult:
    status: int
    contours: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    report: ResidualReport | None = None


def diagnostics_dict(solution, report: ResidualReport, runtime: float, oracle_dev=None) -> dict:
    conv = convergence_report(solution.setup.group)
    out = {
        "constants": {"a": list(solution.constants.a), "d_tilde": list(solution.constants.d_tilde)},
        "residuals": report.residuals_dict(),
        "residue_identity_defects": report.residue_identity_defects,
        "convergence": {
            "level_sums": list(conv.level_sums),
            "ratio": conv.ratio,
            "verdict": conv.verdict,
            "tail_estimate": conv.tail_estimate,
        },
        "overlap": report.overlap.to_dict() if report.overlap else {"flag": False, "pairs": []},
        "runtime_seconds": runtime,
    }
    if oracle_dev is not None:
        out["oracle_deviation"] = oracle_dev
    return out


def run(config: RunConfig, out_dir=None, svg=False, oracle=False) -> RunResult:
    """Solve, sample and write artifacts; returns the exit status and products."""
    t0 = time.perf_counter()
    if oracle and config.n != 1:
        raise ConfigError("--oracle requires a single circle")
    setup = config.setup()
    solution = solve(setup)
    contours = sample_contours(solution, config.samples_per_contour)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonUnivalentWarning)
        report = residual_report(solution, contours)
    for w in caught:
        log.warning("%s", w.message)
    dev = None
    if oracle:
        c = setup.domain.circles[0]
        if abs(c.center) > 1e-14 or abs(c.radius - 1) > 1e-14:
            raise ConfigError("--oracle requires the unit circle at the origin")
        orc = ellipse_oracle(config.kappa[0], config.tau, config.tau_inf, config.c_minus1)
        dev = oracle_deviation(contours[0], orc)
    diag = diagnostics_dict(solution, report, time.perf_counter() - t0, dev)
    overlap = bool(report.overlap and report.overlap.flag)
    worst = max(report.imF, report.physical_bc)
    if not np.isfinite(worst) or worst > config.hard_residual_ceiling:
        log.error("boundary residual %.3g exceeds the ceiling %.3g", worst, config.hard_residual_ceiling)
        status = EXIT_ERROR
    elif overlap:
        log.warning("contours overlap: %s", report.overlap.pairs)
        status = EXIT_OVERLAP
    else:
        status = EXIT_OK
    diag["runtime_seconds"] = time.perf_counter() - t0
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_contours(contours, out / "contours.csv")
        emit_diagnostics(diag, out / "diagnostics.json")
        if svg:
            emit_svg(contours, setup.domain.circles, out / "plot.svg")
    return RunResult(status, contours, diag, report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="uniform-inclusions",
        description="Profiles of uniformly stressed inclusions under antiplane shear.",
    )
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out-dir", default=".", help="directory for contours.csv, diagnostics.json, plot.svg")
    p.add_argument("--max-level", type=int, help="group truncation level")
    p.add_argument("--quadrature-n", type=int, help="N: 2N+1 quadrature nodes per circle")
    p.add_argument("--samples", type=int, help="samples per contour")
    p.add_argument("--svg", action="store_true", help="also write plot.svg")
    p.add_argument("--oracle", action="store_true", help="compare with the closed-form ellipse (n = 1)")
    p.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = RunConfig.load(args.config)
        over: dict[str, Any] = {}
        if args.max_level is not None:
            over["max_level"] = args.max_level
        if args.quadrature_n is not None:
            over["quadrature_N"] = args.quadrature_n
        if args.samples is not None:
            over["samples_per_contour"] = args.samples
        cfg = cfg.replace(**over) if over else cfg
        if args.dump_config:
            print(cfg.dumps())
            return EXIT_OK
        result = run(cfg, args.out_dir, svg=args.svg, oracle=args.oracle)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DomainError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return result.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
