import json
import logging
from pathlib import Path
from typing import Callable, List, Optional

import click
from dependency_injector.wiring import Provide, inject

from app.core.config import SolverLimits
from app.core.exceptions import exception_constants
from app.core.exceptions.base_exceptions import ExitCode, ViaphyException
from app.core.exceptions.local_exceptions import InstanceFormatError
from app.infrastructure.formats.instance_format import parse_instance, serialize_instance
from app.schemas.instance import Instance
from app.schemas.solve_report import Algorithm, JsonReport, SolverConfig
from app.schemas.species_set import SpeciesSet
from app.services.pd_oracle import OracleBuilder, PdOracle
from app.services.reduction_service import ReductionKind, ReductionService
from app.services.solver_service import SolverService
from app.services.verification_service import VerificationService, to_json_report
from app.services.viability_service import ViabilityService

logger = logging.getLogger(__name__)


class CommandHandler:
    """
    Carries out one CLI subcommand. Results go to stdout; errors are logged
    once here and turned into the process exit code.
    """

    @inject
    def __init__(
        self,
        # string references keep the container import out of this module
        viability_service: ViabilityService = Provide["viability_service"],
        solver_service: SolverService = Provide["solver_service"],
        verification_service: VerificationService = Provide["verification_service"],
        reduction_service: ReductionService = Provide["reduction_service"],
        oracle_builder: OracleBuilder = Provide["oracle_builder"],
        limits: SolverLimits = Provide["limits"],
    ):
        self.viability_service = viability_service
        self.solver_service = solver_service
        self.verification_service = verification_service
        self.reduction_service = reduction_service
        self.oracle_builder = oracle_builder
        self.limits = limits

    def execute(self, action: Callable[..., None], *args, **kwargs) -> int:
        try:
            action(*args, **kwargs)
            return ExitCode.SUCCESS
        except ViaphyException as e:
            logger.log(
                logging.getLevelName(e.log_level.upper()),
                f"{e.error_type}: {e.log_message}",
                extra={"context": e.internal_context},
            )
            click.echo(f"error: {e}", err=True)
            return e.exit_code

    # ---- helpers ----

    def load(self, path: str) -> Instance:
        return parse_instance(_read(path))

    def _config(self, algorithm: str, p: int, seed_cap: Optional[int]) -> SolverConfig:
        limits = self.limits
        if seed_cap is not None:
            limits = limits.model_copy(update={"max_seeds": seed_cap})
        return SolverConfig(algorithm=Algorithm(algorithm), p=p, limits=limits)

    # ---- subcommands ----

    def solve(self, path: str, algorithm: str, p: int, seed_cap: Optional[int], as_json: bool) -> None:
        instance = self.load(path)
        report = self.solver_service.solve(instance, self.oracle_builder.build(instance), self._config(algorithm, p, seed_cap))
        _emit(to_json_report(report, instance), as_json)

    def verify(self, path: str, algorithm: str, p: int, seed_cap: Optional[int], as_json: bool) -> None:
        instance = self.load(path)
        report = self.verification_service.verify(
            instance, self.oracle_builder.build(instance), self._config(algorithm, p, seed_cap)
        )
        _emit(report, as_json)

    def check(self, path: str, names: List[str], as_json: bool) -> None:
        instance = self.load(path)
        species = instance.species_set(names)
        viable = self.viability_service.is_viable(species, instance.web)
        if as_json:
            click.echo(json.dumps({"set": instance.names_of(species), "viable": viable}))
        else:
            click.echo("true" if viable else "false")

    def pd(self, path: str, names: List[str], explain: bool, as_json: bool) -> None:
        instance = self.load(path)
        species = instance.species_set(names)
        oracle = PdOracle(instance.tree, instance.species)
        value = oracle.value(species)
        edges = oracle.edge_cover(species)
        if as_json:
            payload = {"set": instance.names_of(species), "pd": value}
            if explain:
                payload["edges"] = [{"parent": a, "child": b, "weight": w} for a, b, w in edges]
            click.echo(json.dumps(payload))
            return
        click.echo(str(value))
        if explain:
            for parent, child, weight in edges:
                click.echo(f"  {parent} -> {child}  {weight}")

    def extend(self, path: str, names: List[str], base: List[str], as_json: bool) -> None:
        instance = self.load(path)
        species = instance.species_set(names)
        selected = instance.species_set(base)
        extension = self.viability_service.viable_extension(species, instance.web, selected)
        if as_json:
            click.echo(json.dumps({
                "set": instance.names_of(species),
                "base": instance.names_of(selected),
                "extension": instance.names_of(extension),
                "cost": len(extension) - len(selected),
            }))
        else:
            click.echo(",".join(instance.names_of(extension)))

    def depth(self, path: str, k: Optional[int], as_json: bool) -> None:
        instance = self.load(path)
        info = self.viability_service.truncated_depth(instance.web, k or instance.budget)
        if as_json:
            click.echo(info.model_dump_json())
        else:
            click.echo(f"d={info.d} longest_path_len={info.longest_path_len}")

    def generate(self, kind: str, source_path: str, k: Optional[int], out_path: str) -> None:
        instance = self.reduction_service.generate(ReductionKind(kind), _read(source_path), k)
        text = serialize_instance(instance)
        if out_path == "-":
            click.echo(text, nl=False)
            return
        try:
            Path(out_path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise InstanceFormatError(f"Cannot write '{out_path}': {e.strerror}") from e
        logger.info(f"Wrote {instance.n}-species instance to {out_path}")


def parse_set(raw: Optional[str]) -> List[str]:
    if not raw:
        return []
    return [name.strip() for name in raw.split(",") if name.strip()]


def _read(path: str) -> str:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InstanceFormatError(
            exception_constants.FILE_UNREADABLE.format(path=path, reason=e.strerror or e.__class__.__name__)
        ) from e
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        column = e.start - (raw.rfind(b"\n", 0, e.start) + 1) + 1
        raise InstanceFormatError(
            exception_constants.FILE_NOT_UTF8.format(path=path), line=line, column=column
        ) from e


def _emit(report: JsonReport, as_json: bool) -> None:
    if as_json:
        click.echo(report.model_dump_json(exclude_none=True))
        return
    rows = report.model_dump(exclude_none=True)
    rows["set"] = ",".join(rows["set"]) or "(empty)"
    width = max(len(key) for key in rows)
    for key, value in rows.items():
        click.echo(f"{key.ljust(width)}  {value}")
