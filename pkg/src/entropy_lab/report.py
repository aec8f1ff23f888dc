"""Report runners behind the command-line front end.

Every runner turns a validated `RunConfig` into a `Report`: an ordered list of rows and
the findings that make the run exit with status 1. Rows never carry wall times unless
asked to, so that reruns on the same inputs produce the same bytes.
"""

import dataclasses as D
import logging
import math
import sys
import time
from enum import StrEnum
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd
from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    TypeAdapter,
    field_validator,
)

from entropy_lab.checks import run_checks
from entropy_lab.classical import (
    characteristic_derivative,
    gibbs_entropy_identities,
    gibbs_state,
    kl_divergence,
    reference_identity,
)
from entropy_lab.config import GridSpec, LabConfig
from entropy_lab.crossed import (
    PROFILES,
    BaseTrace,
    ModelCrossedElement,
    TailMethod,
    commuting_relative_entropy,
    regular_entropy,
)
from entropy_lab.io import load_density, load_distribution, load_energies, load_matrix
from entropy_lab.orlicz import (
    FundamentalFunction,
    NormFlavor,
    YoungFunction,
    YoungKind,
    luxemburg_norm,
)
from entropy_lab.routes import CrossValidation, LimitRoute, Method, relative_entropy

log = logging.getLogger(__name__)

COLUMNS = ["section", "name", "value", "error", "units", "elapsed_ms"]

# Exact identities are held to this multiple of their magnitude.
IDENTITY_RTOL = 1e-12


class Subcommand(StrEnum):
    QuantumRel = "quantum rel"
    QuantumSweepT = "quantum sweep-t"
    ClassicalReport = "classical report"
    OrliczNorm = "orlicz norm"
    OrliczRegular = "orlicz regular"
    CrossedTail = "crossed tail"
    Check = "check"


class OutputFormat(StrEnum):
    Csv = "csv"
    Json = "json"


class ProfileKind(StrEnum):
    Identity = "identity"
    PhiLog = "phi_log"
    PhiEnt = "phi_ent"


class RunConfig(BaseModel):
    """Everything one invocation needs, validated before any computation starts."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    subcommand: Subcommand

    rho: Path | None = None
    sigma: Path | None = None
    dist: Path | None = None
    ref: Path | None = None
    energies: Path | None = None
    density: Path | None = None

    method: Method = Method.All
    young: YoungKind = YoungKind.PsiLog
    flavor: NormFlavor = NormFlavor.Luxemburg
    profile: ProfileKind = ProfileKind.Identity
    trace: BaseTrace = BaseTrace.Normalized

    eps_grid: GridSpec | None = None
    t0: PositiveFloat | None = None
    tol: PositiveFloat | None = None
    beta: PositiveFloat = 1.0

    seed: NonNegativeInt = 0
    samples: PositiveInt | None = None
    checks: tuple[str, ...] | None = None

    out: Path | None = None
    format: OutputFormat = OutputFormat.Csv
    timings: bool = False

    lab: LabConfig = LabConfig()

    @field_validator("young")
    @classmethod
    def _check_young(cls, young: YoungKind) -> YoungKind:
        if young == YoungKind.Custom:
            raise ValueError("Custom Young functions are only available from Python.")
        return young

    def settings(self) -> LabConfig:
        """The lab configuration with the command-line overrides applied."""
        overrides = {
            "eps_grid": self.eps_grid,
            "limit_t0": self.t0,
            "route_tolerance": self.tol,
        }
        return self.lab.model_copy(
            update={key: value for key, value in overrides.items() if value is not None}
        )

    @property
    def tolerance(self) -> float:
        return self.settings().route_tolerance


class ReportRow(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    section: str
    name: str
    value: float
    error: float | None = None
    units: str = ""
    elapsed_ms: float | None = None


@D.dataclass
class Report:
    rows: list[ReportRow] = D.field(default_factory=list)
    findings: list[str] = D.field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.findings else 0

    def add(self, **fields) -> ReportRow:
        row = ReportRow(**fields)
        self.rows.append(row)
        return row

    def require(self, ok: bool, finding: str):
        if not ok:
            log.warning("Tolerance violated: %s", finding)
            self.findings.append(finding)

    def compare(
        self,
        section: str,
        name: str,
        value: float,
        expected: float,
        atol: float,
        rtol: float = 0.0,
    ):
        """Adds `value` with its distance to `expected` in the error column."""
        defect = 0.0 if value == expected else abs(value - expected)
        self.add(section=section, name=name, value=value, error=defect, units="nats")
        self.require(
            defect <= max(atol, rtol * abs(expected)),
            f"{section}/{name} misses {expected:.12g} by {defect:.3e}",
        )


def timed[T](run: RunConfig, fn: Callable[[], T]) -> tuple[T, float | None]:
    start = time.perf_counter()
    result = fn()
    elapsed = (time.perf_counter() - start) * 1e3
    return result, elapsed if run.timings else None


def _required(path: Path | None, flag: str) -> Path:
    if path is None:
        raise FileNotFoundError(f"Missing required input {flag}.")
    return path


def run_quantum_report(run: RunConfig) -> Report:
    """One row per selected route, then the largest pairwise discrepancy."""
    settings = run.settings()
    rho = load_density(_required(run.rho, "--rho"), settings)
    sigma = load_density(_required(run.sigma, "--sigma"), settings)
    report = Report()

    results = []
    for route in run.method.routes():
        result, elapsed = timed(run, lambda: relative_entropy(rho, sigma, route, settings))
        results.append(result)
        report.add(
            section="quantum",
            name=str(route),
            value=result.value,
            error=result.error_estimate,
            units="nats",
            elapsed_ms=elapsed,
        )

    if len(results) > 1:
        discrepancy = CrossValidation(tuple(results)).discrepancy
        report.add(section="quantum", name="discrepancy", value=discrepancy, units="nats")
        report.require(
            discrepancy <= run.tolerance,
            f"route discrepancy {discrepancy:.3e} exceeds {run.tolerance:g}",
        )

    return report


def _sweep_rows(report: Report, section: str, parameter: str, table):
    for x, value in table:
        report.add(section=section, name=f"{parameter}={x:.12g}", value=value, units="nats")


def run_t_sweep(run: RunConfig) -> Report:
    settings = run.settings()
    rho = load_density(_required(run.rho, "--rho"), settings)
    sigma = load_density(_required(run.sigma, "--sigma"), settings)
    report = Report()

    result, elapsed = timed(run, lambda: LimitRoute(config=settings).serve(rho, sigma))
    _sweep_rows(report, "sweep-t", "t", result.diagnostics)
    report.add(
        section="sweep-t",
        name="extrapolated",
        value=result.value,
        error=result.error_estimate,
        units="nats",
        elapsed_ms=elapsed,
    )
    return report


def run_eps_sweep(run: RunConfig) -> Report:
    """The eps sweep of the regularized entropy of `--density`, or of the commuting
    crossed-product bracket when `--rho` and `--sigma` are given instead."""
    settings = run.settings()
    report = Report()

    if run.density is None:
        theta = load_density(_required(run.rho, "--rho"), settings)
        phi = load_density(_required(run.sigma, "--sigma"), settings)
        entropy, elapsed = timed(
            run, lambda: commuting_relative_entropy(theta, phi, None, settings)
        )

        _sweep_rows(report, "sweep-eps", "eps", entropy.infimum.sweep)
        report.add(
            section="sweep-eps",
            name="infimum",
            value=entropy.infimum.value,
            units="nats",
            elapsed_ms=elapsed,
        )
        report.compare(
            "sweep-eps", "phi(f log f)", entropy.value, entropy.infimum.value, run.tolerance
        )
        return report

    a = load_matrix(run.density)
    entropy, elapsed = timed(run, lambda: regular_entropy(a, run.trace, None, settings))

    _sweep_rows(report, "sweep-eps", "eps", entropy.infimum.sweep)
    report.add(
        section="sweep-eps",
        name="infimum",
        value=entropy.value,
        units="nats",
        elapsed_ms=elapsed,
    )
    report.compare("sweep-eps", "comparator", entropy.comparator, entropy.value, run.tolerance)
    report.compare("sweep-eps", "limit", entropy.limit, entropy.value, run.tolerance)
    return report


def run_sweep(run: RunConfig) -> Report:
    match run.subcommand:
        case Subcommand.QuantumSweepT:
            return run_t_sweep(run)
        case Subcommand.OrliczRegular:
            return run_eps_sweep(run)
        case _:
            raise ValueError(f"{run.subcommand} is not a sweep.")


def run_classical_report(run: RunConfig) -> Report:
    """Classical entropies with both sides of every identity they satisfy.

    Exact identities must hold to rounding. Characteristic-function derivatives are
    difference quotients and must hold to the run tolerance.
    """
    settings = run.settings()
    step = settings.characteristic_step
    report = Report()

    if run.dist is None and run.energies is None:
        raise FileNotFoundError("Give a distribution with --dist or energies with --energies.")

    if run.dist is not None:
        p = load_distribution(run.dist, settings)
        identity = reference_identity(p)
        k = p.log_values()

        report.add(
            section="classical", name="h-functional", value=identity.h_functional, units="nats"
        )
        report.compare(
            "classical", "kl-vs-counting", identity.against_counting, identity.h_functional,
            IDENTITY_RTOL, IDENTITY_RTOL,
        )
        report.compare(
            "classical", "kl-vs-uniform", identity.against_uniform,
            identity.h_functional + identity.offset, IDENTITY_RTOL, IDENTITY_RTOL,
        )
        report.compare(
            "classical", "characteristic-derivative", characteristic_derivative(k, p, step),
            identity.h_functional, run.tolerance,
        )

        if run.ref is not None:
            q = load_distribution(run.ref, settings)
            kl = kl_divergence(p, q)
            report.add(section="classical", name="kl", value=kl, units="nats")

            if math.isfinite(kl):
                cocycle = characteristic_derivative(k, p, step, k_reference=q.log_values())
                report.compare("classical", "cocycle-derivative", cocycle, kl, run.tolerance)

    if run.energies is not None:
        base, energies = load_energies(run.energies)
        gibbs = gibbs_state(energies, run.beta, base)
        identities = gibbs_entropy_identities(gibbs)

        for atom, value in zip(base.atoms, gibbs.density.values):
            report.add(section="gibbs", name=f"p[{atom}]", value=value)

        report.add(section="gibbs", name="log-partition", value=gibbs.log_partition)
        report.add(
            section="gibbs", name="h-functional", value=identities.h_functional, units="nats"
        )
        report.compare(
            "gibbs", "mean-k", identities.mean_k, identities.h_functional,
            IDENTITY_RTOL, IDENTITY_RTOL,
        )
        report.compare(
            "gibbs", "characteristic-derivative",
            characteristic_derivative(gibbs.k_values, gibbs.density, step),
            identities.mean_k, run.tolerance,
        )

    return report


def run_orlicz_norm(run: RunConfig) -> Report:
    """The Luxemburg norm of the density next to the fundamental function of its support."""
    p = load_distribution(_required(run.dist, "--dist"), run.settings())
    young = YoungFunction.of(run.young)
    report = Report()

    norm, elapsed = timed(run, lambda: luxemburg_norm(p, young))
    support = float(np.sum(p.base.weights[p.values > 0]))

    report.add(section="orlicz", name=f"luxemburg[{young}]", value=norm, elapsed_ms=elapsed)
    report.add(section="orlicz", name="support-measure", value=support)
    report.add(
        section="orlicz",
        name=f"fundamental[{run.flavor}]",
        value=FundamentalFunction(young, run.flavor)(support),
    )
    return report


def run_crossed_tail(run: RunConfig) -> Report:
    """Tail traces over the eps grid; the error column is the gap to quadrature."""
    settings = run.settings()
    a = load_matrix(_required(run.density, "--density"))
    h = ModelCrossedElement.separable(a, PROFILES[run.profile], run.trace)
    report = Report()

    for eps in settings.eps_grid.points():
        closed, elapsed = timed(run, lambda: h.tail_trace(eps))
        quadrature = h.tail_trace(eps, TailMethod.Quadrature)
        report.add(
            section="crossed-tail",
            name=f"eps={eps:.12g}",
            value=closed,
            error=abs(closed - quadrature),
            elapsed_ms=elapsed,
        )

    report.add(section="crossed-tail", name="norm-1", value=h.norm_1())
    report.add(section="crossed-tail", name="base-trace", value=h.base_trace())
    return report


def run_check(run: RunConfig) -> Report:
    report = Report()
    names = None if run.checks is None else list(run.checks)

    for result in run_checks(run.seed, names, run.samples, run.settings()):
        report.add(
            section="check",
            name=result.name,
            value=result.defect,
            units=f"tol={result.tolerance:g}",
        )
        report.require(result.passed, f"{result.name} defect {result.defect:.3e}")

    return report


RUNNERS: dict[Subcommand, Callable[[RunConfig], Report]] = {
    Subcommand.QuantumRel: run_quantum_report,
    Subcommand.QuantumSweepT: run_sweep,
    Subcommand.ClassicalReport: run_classical_report,
    Subcommand.OrliczNorm: run_orlicz_norm,
    Subcommand.OrliczRegular: run_sweep,
    Subcommand.CrossedTail: run_crossed_tail,
    Subcommand.Check: run_check,
}


def execute(run: RunConfig) -> Report:
    log.debug("Running %s", run.subcommand)
    return RUNNERS[run.subcommand](run)


def render_report(rows: list[ReportRow], format: OutputFormat) -> str:
    match format:
        case OutputFormat.Csv:
            frame = pd.DataFrame([row.model_dump() for row in rows], columns=COLUMNS)
            return frame.to_csv(index=False, float_format="%.12g", lineterminator="\n")
        case OutputFormat.Json:
            return TypeAdapter(list[ReportRow]).dump_json(rows, indent=2).decode() + "\n"


def emit_report(rows: list[ReportRow], format: OutputFormat, path: Path | None = None):
    text = render_report(rows, format)

    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    with path.open("w", newline="\n") as f:
        f.write(text)
