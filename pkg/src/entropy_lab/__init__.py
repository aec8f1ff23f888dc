import dataclasses as D
import logging
from collections.abc import Sequence
from pathlib import Path
from textwrap import dedent
from typing import Annotated

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from entropy_lab.checks import CHECKS
from entropy_lab.config import GridSpec, LabConfig
from entropy_lab.crossed import BaseTrace
from entropy_lab.errors import EntropyLabError
from entropy_lab.orlicz import NormFlavor, YoungKind
from entropy_lab.report import (
    OutputFormat,
    ProfileKind,
    RunConfig,
    Subcommand,
    emit_report,
    execute,
)
from entropy_lab.routes import Method

log = logging.getLogger(__name__)

app = typer.Typer(
    no_args_is_help=True,
    rich_markup_mode="markdown",
)

quantum = typer.Typer(no_args_is_help=True, help="Relative entropy of density matrices.")
classical = typer.Typer(no_args_is_help=True, help="Entropies of discrete measures.")
orlicz = typer.Typer(no_args_is_help=True, help="Orlicz norms and the regularized entropy.")
crossed = typer.Typer(no_args_is_help=True, help="Tail traces in the model crossed product.")

app.add_typer(quantum, name="quantum")
app.add_typer(classical, name="classical")
app.add_typer(orlicz, name="orlicz")
app.add_typer(crossed, name="crossed")

err_console = Console(stderr=True, markup=False, highlight=False)


@D.dataclass
class CliState:
    lab: LabConfig = D.field(default_factory=LabConfig)
    dry_run: bool = False
    run: RunConfig | None = None


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def parse_grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def _input_file(flag: str, help: str):
    return typer.Option(
        flag,
        help=help,
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
    )


Rho = Annotated[Path, _input_file("--rho", "JSON density matrix of the state.")]
Sigma = Annotated[Path, _input_file("--sigma", "JSON density matrix of the reference state.")]

OutPath = Annotated[
    Path | None,
    typer.Option(
        "--out",
        help="Write the report to this file instead of stdout.",
        file_okay=True,
        dir_okay=False,
        writable=True,
    ),
]
Format = Annotated[OutputFormat, typer.Option("--format", help="Report format.")]
Timings = Annotated[
    bool,
    typer.Option(
        "--timings",
        help="Fill the `elapsed_ms` column. Reruns then differ byte for byte.",
    ),
]
Tolerance = Annotated[
    float | None,
    typer.Option("--tol", help="Agreement tolerance in nats; exceeding it exits with status 1."),
]
EpsGrid = Annotated[
    GridSpec | None,
    typer.Option(
        "--eps-grid",
        help="Log-spaced eps grid `lo:hi:n`.",
        metavar="LO:HI:N",
        parser=parse_grid,
    ),
]
Trace = Annotated[
    BaseTrace,
    typer.Option("--trace", help="Trace on the base algebra: `Tr / n` or `Tr`."),
]


def submit(ctx: typer.Context, subcommand: Subcommand, **fields):
    """Validates the command line into a `RunConfig` and runs it, unless parsing only."""
    state = ctx.ensure_object(CliState)

    try:
        run = RunConfig(subcommand=subcommand, lab=state.lab, **fields)
    except ValidationError as e:
        raise typer.BadParameter(str(e)) from e

    if state.dry_run:
        state.run = run
        return

    raise typer.Exit(code=perform(run))


def perform(run: RunConfig) -> int:
    """Runs a validated command and returns its exit status."""
    try:
        report = execute(run)
        emit_report(report.rows, run.format, run.out)
    except (EntropyLabError, OSError, ValidationError) as e:
        log.debug("%s failed", run.subcommand, exc_info=True)
        err_console.print(f"error: {e}", style="bold red")
        return 2

    for finding in report.findings:
        err_console.print(f"tolerance violated: {finding}", style="yellow")

    return report.exit_code


def parse_and_validate(argv: Sequence[str]) -> RunConfig:
    """Parses a command line into its `RunConfig` without computing anything.

    Usage errors are reported on stderr and surface as `typer.Exit` with status 2.
    """
    state = CliState(dry_run=True)
    command = typer.main.get_command(app)

    try:
        command.main(args=list(argv), prog_name="entropy-lab", obj=state)
    except SystemExit as e:
        if e.code not in (0, None):
            raise typer.Exit(code=2) from e

    if state.run is None:
        err_console.print("error: no command given", style="bold red")
        raise typer.Exit(code=2)

    return state.run


@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[
        bool,
        typer.Option("-v", "--verbose", help="Log debug messages to stderr."),
    ] = False,
    config_path: Annotated[
        Path | None,
        typer.Option(
            "-c",
            "--config",
            help="JSON file overriding the numerical tolerances and grids.",
            file_okay=True,
            dir_okay=False,
            exists=True,
            readable=True,
        ),
    ] = None,
):
    """Cross-validated relative entropies, from density matrices to crossed products."""
    configure_logging(verbose)
    state = ctx.ensure_object(CliState)

    if config_path is not None:
        try:
            state.lab = LabConfig.load(config_path)
        except (ValueError, TypeError) as e:
            raise typer.BadParameter(str(e), param_hint="--config") from e


@quantum.command("rel")
def quantum_rel(
    ctx: typer.Context,
    rho: Rho,
    sigma: Sigma,
    method: Annotated[
        Method,
        typer.Option(
            "--method",
            help=dedent(
                """\
                The route to `S(rho|sigma)`:
                - `divergence`: `Tr rho (log rho - log sigma)`
                - `limit`: derivative of the cocycle expectation at `t = 0`
                - `araki`: spectral measure of the relative modular operator
                - `interp`: interpolated trace functional as `s -> 1`
                - `all`: every route, with their discrepancy
                """
            ),
        ),
    ] = Method.All,
    t0: Annotated[
        float | None,
        typer.Option("--t0", help="First step of the limit route's schedule."),
    ] = None,
    tol: Tolerance = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """Relative entropy of two density matrices by one or every route."""
    submit(
        ctx,
        Subcommand.QuantumRel,
        rho=rho,
        sigma=sigma,
        method=method,
        t0=t0,
        tol=tol,
        out=out,
        format=format,
        timings=timings,
    )


@quantum.command("sweep-t")
def quantum_sweep_t(
    ctx: typer.Context,
    rho: Rho,
    sigma: Sigma,
    t0: Annotated[
        float | None,
        typer.Option("--t0", help="First step of the halving schedule."),
    ] = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """The cocycle difference quotients on the halving schedule and their extrapolation."""
    submit(
        ctx,
        Subcommand.QuantumSweepT,
        rho=rho,
        sigma=sigma,
        t0=t0,
        out=out,
        format=format,
        timings=timings,
    )


@classical.command("report")
def classical_report(
    ctx: typer.Context,
    dist: Annotated[
        Path | None,
        _input_file("--dist", "CSV distribution `atom,weight[,density]`."),
    ] = None,
    ref: Annotated[
        Path | None,
        _input_file("--ref", "CSV reference distribution for the relative entropy."),
    ] = None,
    energies: Annotated[
        Path | None,
        _input_file("--energies", "CSV energies `atom,energy[,weight]` of a Gibbs state."),
    ] = None,
    beta: Annotated[float, typer.Option("--beta", help="Inverse temperature.")] = 1.0,
    tol: Tolerance = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """Entropy identities of a distribution, a pair or a Gibbs state."""
    if dist is None and energies is None:
        raise typer.BadParameter("Give --dist, --energies or both.", param_hint="--dist")
    if ref is not None and dist is None:
        raise typer.BadParameter("A reference needs a distribution.", param_hint="--ref")

    submit(
        ctx,
        Subcommand.ClassicalReport,
        dist=dist,
        ref=ref,
        energies=energies,
        beta=beta,
        tol=tol,
        out=out,
        format=format,
        timings=timings,
    )


@orlicz.command("norm")
def orlicz_norm(
    ctx: typer.Context,
    dist: Annotated[Path, _input_file("--dist", "CSV distribution `atom,weight[,density]`.")],
    young: Annotated[YoungKind, typer.Option("--young", help="Young function.")] = YoungKind.PsiLog,
    flavor: Annotated[
        NormFlavor,
        typer.Option("--flavor", help="Norm used for the fundamental function."),
    ] = NormFlavor.Luxemburg,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """Luxemburg norm of a density and the fundamental function of its support."""
    submit(
        ctx,
        Subcommand.OrliczNorm,
        dist=dist,
        young=young,
        flavor=flavor,
        out=out,
        format=format,
        timings=timings,
    )


@orlicz.command("regular")
def orlicz_regular(
    ctx: typer.Context,
    density: Annotated[
        Path | None,
        _input_file("--density", "JSON positive matrix `a` with `tau(a) = 1`."),
    ] = None,
    rho: Annotated[Path | None, _input_file("--rho", "JSON state commuting with --sigma.")] = None,
    sigma: Annotated[Path | None, _input_file("--sigma", "JSON reference state.")] = None,
    trace: Trace = BaseTrace.Normalized,
    eps_grid: EpsGrid = None,
    tol: Tolerance = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """The eps infimum defining the regularized entropy, with its closed forms."""
    if (density is None) == (rho is None or sigma is None):
        raise typer.BadParameter(
            "Give either --density or both --rho and --sigma.",
            param_hint="--density",
        )

    submit(
        ctx,
        Subcommand.OrliczRegular,
        density=density,
        rho=rho,
        sigma=sigma,
        trace=trace,
        eps_grid=eps_grid,
        tol=tol,
        out=out,
        format=format,
        timings=timings,
    )


@crossed.command("tail")
def crossed_tail(
    ctx: typer.Context,
    density: Annotated[Path, _input_file("--density", "JSON positive base matrix `a`.")],
    profile: Annotated[
        ProfileKind,
        typer.Option("--profile", help="Profile `g` of the element `a (x) g(e^t)`."),
    ] = ProfileKind.Identity,
    trace: Trace = BaseTrace.Normalized,
    eps_grid: EpsGrid = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
    timings: Timings = False,
):
    """Tail traces `tau(chi_(eps, inf)(h))` over an eps grid."""
    submit(
        ctx,
        Subcommand.CrossedTail,
        density=density,
        profile=profile,
        trace=trace,
        eps_grid=eps_grid,
        out=out,
        format=format,
        timings=timings,
    )


@app.command("check")
def check(
    ctx: typer.Context,
    seed: Annotated[
        int,
        typer.Option("--seed", envvar="ENTROPY_LAB_SEED", min=0, help="Seed of every random draw."),
    ] = 0,
    samples: Annotated[
        int | None,
        typer.Option("--samples", min=1, help="Override the per-check sample count."),
    ] = None,
    only: Annotated[
        list[str] | None,
        typer.Option("--only", help=f"Run only these checks: {', '.join(CHECKS)}."),
    ] = None,
    out: OutPath = None,
    format: Format = OutputFormat.Csv,
):
    """The randomized acceptance checks, reproducible from the seed."""
    if only and (unknown := sorted(set(only) - set(CHECKS))):
        raise typer.BadParameter(f"Unknown checks: {', '.join(unknown)}.", param_hint="--only")

    submit(
        ctx,
        Subcommand.Check,
        seed=seed,
        samples=samples,
        checks=tuple(only) if only else None,
        out=out,
        format=format,
    )


if __name__ == "__main__":
    app()
