from dependency_injector import containers, providers

from app.core.config import SolverLimits
from app.services.pd_oracle import OracleBuilder
from app.services.reduction_service import ReductionService
from app.services.solver_service import SolverService
from app.services.verification_service import VerificationService
from app.services.viability_service import ViabilityService


class Container(containers.DeclarativeContainer):
    """Dependency injection container"""

    # Configuration
    config = providers.Configuration()

    limits = providers.Singleton(SolverLimits.model_validate, config.LIMITS)

    # Application Services
    oracle_builder = providers.Factory(OracleBuilder, cache_size=config.ORACLE_CACHE_SIZE)

    viability_service = providers.Factory(ViabilityService, limits=limits)

    solver_service = providers.Factory(SolverService, limits=limits, threads=config.THREADS)

    verification_service = providers.Factory(VerificationService, solver_service=solver_service)

    reduction_service = providers.Factory(ReductionService)
