"""
viaphy command line.

    viaphy [--log-level L] [--threads N] [--cache-size N] COMMAND ...

Exit codes: 0 success, 1 input error, 2 infeasible or a configured cap hit.
"""
import logging
import sys
from typing import Optional

import click

from app.core.config import LogLevel, settings
from app.core.container import Container
from app.core.exceptions.base_exceptions import ExitCode
from app.core.logging_config import configure_logging
from app.handlers.command_handler import CommandHandler, parse_set
from app.schemas.solve_report import Algorithm
from app.services.reduction_service import ReductionKind

logger = logging.getLogger(__name__)

ALGORITHMS = click.Choice([a.value for a in Algorithm])


class ViaphyGroup(click.Group):
    """Maps click's own usage errors to the input-error exit code."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            code = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            code = ExitCode.INPUT_ERROR
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            code = ExitCode.INPUT_ERROR
        if not standalone_mode:
            return code
        sys.exit(int(code or 0))


def build_container(threads: Optional[int] = None, cache_size: Optional[int] = None) -> Container:
    container = Container()
    values = settings.model_dump()
    if threads is not None:
        values["THREADS"] = threads
    if cache_size is not None:
        values["ORACLE_CACHE_SIZE"] = cache_size
    container.config.from_dict(values)
    container.wire(modules=["app.handlers.command_handler"])
    return container


def _handler(ctx: click.Context) -> CommandHandler:
    return ctx.obj["handler"]


def _run(ctx: click.Context, action, *args) -> None:
    ctx.exit(int(_handler(ctx).execute(action, *args)))


set_option = click.option("--set", "members", default="", help="Comma-separated species names, e.g. A,B")
json_option = click.option("--json", "as_json", is_flag=True, help="Print one JSON object")


@click.group(cls=ViaphyGroup)
@click.version_option(settings.VERSION, prog_name=settings.app_name)
@click.option(
    "--log-level",
    type=click.Choice([level.value for level in LogLevel], case_sensitive=False),
    default=None,
    help="Level of the stderr log (default from VIAPHY_LOG_LEVEL)",
)
@click.option("--threads", type=click.IntRange(1, 64), default=None, help="Worker threads for candidate evaluation")
@click.option("--cache-size", type=click.IntRange(min=0), default=None, help="Objective memo entries, 0 disables")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], threads: Optional[int], cache_size: Optional[int]):
    """Maximise phylogenetic diversity under food-web viability constraints."""
    configure_logging(LogLevel(log_level.upper()) if log_level else settings.LOG_LEVEL, settings.LOG_JSON)
    container = build_container(threads, cache_size)
    ctx.call_on_close(container.unwire)
    ctx.obj = {"container": container, "handler": CommandHandler()}


@cli.command()
@click.argument("instance_path")
@click.option("--algorithm", type=ALGORITHMS, default=Algorithm.GREEDY_P.value, show_default=True)
@click.option("--p", "p", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed-cap", type=click.IntRange(min=1), default=None, help="Override the enum_p seed cap")
@json_option
@click.pass_context
def solve(ctx, instance_path, algorithm, p, seed_cap, as_json):
    """Solve an instance and print the report."""
    _run(ctx, _handler(ctx).solve, instance_path, algorithm, p, seed_cap, as_json)


@cli.command()
@click.argument("instance_path")
@click.option("--algorithm", type=ALGORITHMS, default=Algorithm.GREEDY_P.value, show_default=True)
@click.option("--p", "p", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed-cap", type=click.IntRange(min=1), default=None, help="Override the enum_p seed cap")
@json_option
@click.pass_context
def verify(ctx, instance_path, algorithm, p, seed_cap, as_json):
    """Compare an algorithm against the exact optimum and its guarantee."""
    _run(ctx, _handler(ctx).verify, instance_path, algorithm, p, seed_cap, as_json)


@cli.command()
@click.argument("instance_path")
@set_option
@json_option
@click.pass_context
def check(ctx, instance_path, members, as_json):
    """Print whether a species set is viable."""
    _run(ctx, _handler(ctx).check, instance_path, parse_set(members), as_json)


@cli.command()
@click.argument("instance_path")
@set_option
@click.option("--explain", is_flag=True, help="List the tree edges that are counted")
@json_option
@click.pass_context
def pd(ctx, instance_path, members, explain, as_json):
    """Print the phylogenetic diversity of a species set."""
    _run(ctx, _handler(ctx).pd, instance_path, parse_set(members), explain, as_json)


@cli.command()
@click.argument("instance_path")
@set_option
@click.option("--base", default="", help="Species already selected, comma-separated")
@json_option
@click.pass_context
def extend(ctx, instance_path, members, base, as_json):
    """Print a smallest viable superset of a species set."""
    _run(ctx, _handler(ctx).extend, instance_path, parse_set(members), parse_set(base), as_json)


@cli.command()
@click.argument("instance_path")
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Budget (default: the instance's)")
@json_option
@click.pass_context
def depth(ctx, instance_path, k, as_json):
    """Print the truncated depth of the food web."""
    _run(ctx, _handler(ctx).depth, instance_path, k, as_json)


@cli.command()
@click.argument("kind", type=click.Choice([kind.value for kind in ReductionKind]))
@click.argument("source_path")
@click.option("--k", "k", type=click.IntRange(min=1), default=None, help="Source budget (maxcov, vc)")
@click.option("-o", "--out", "out_path", default="-", show_default=True, help="Instance file to write")
@click.pass_context
def generate(ctx, kind, source_path, k, out_path):
    """Encode a Max Coverage, Max Vertex Cover or 3-SAT input as an instance."""
    _run(ctx, _handler(ctx).generate, kind, source_path, k, out_path)


def main() -> None:
    cli(prog_name=settings.app_name)


if __name__ == "__main__":
    main()
