import logging
from enum import Enum
from typing import Optional

from app.schemas.instance import Instance
from app.schemas.solve_report import (
    Algorithm,
    JsonReport,
    SolveReport,
    SolverConfig,
    approximation_floor,
)
from app.services.pd_oracle import SubmodularOracle
from app.services.solver_service import SolverService
from app.services.viability_service import truncated_depth

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    REPORT = "REPORT"  # no guarantee to check against


def ratio_of(value: int, optimum: int) -> float:
    return 1.0 if optimum == 0 else value / optimum


def to_json_report(
    report: SolveReport,
    instance: Instance,
    optimum: Optional[int] = None,
    verdict: Optional[Verdict] = None,
) -> JsonReport:
    depth = truncated_depth(instance.web, max(report.k, 1))
    floor = None
    ratio = None
    if optimum is not None:
        ratio = ratio_of(report.value, optimum)
        floor = approximation_floor(report.algorithm, report.p or 1, depth.d)
    return JsonReport(
        algorithm=report.algorithm.value,
        p=report.p,
        k=report.k,
        d=depth.d,
        n=instance.n,
        value=report.value,
        set=instance.names_of(report.chosen),
        viable=report.viable,
        optimum=optimum,
        ratio=ratio,
        floor=floor,
        verdict=verdict.value if verdict else None,
        elapsed_ms=report.elapsed_ms,
    )


class VerificationService:
    """Runs an algorithm next to the exact solver and checks its guarantee."""

    def __init__(self, solver_service: SolverService):
        self.solver_service = solver_service

    def verify(self, instance: Instance, oracle: SubmodularOracle, config: SolverConfig) -> JsonReport:
        report = self.solver_service.solve(instance, oracle, config)
        if config.algorithm is Algorithm.EXACT:
            optimum = report.value
        else:
            optimum = self.solver_service.solve(
                instance, oracle, config.model_copy(update={"algorithm": Algorithm.EXACT})
            ).value

        d = truncated_depth(instance.web, instance.budget).d
        floor = approximation_floor(config.algorithm, config.p, d)
        if floor is None:
            verdict = Verdict.REPORT
        else:
            verdict = Verdict.PASS if ratio_of(report.value, optimum) >= floor else Verdict.FAIL

        level = logging.WARNING if verdict is Verdict.FAIL else logging.INFO
        logger.log(level, f"verify {config.algorithm.value}: value={report.value} optimum={optimum} {verdict.value}")
        return to_json_report(report, instance, optimum=optimum, verdict=verdict)
