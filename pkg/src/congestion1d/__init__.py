"""One-dimensional asymptotic-preserving solver for congested crowd flow.

The crowd is a compressible fluid whose density may not exceed a maximal
density that is itself transported by the flow. Each time step runs an
implicit-pressure hyperbolic step, an implicit viscous step and an upwind
transport of the maximal density.
"""
from .diagnostics import DiagnosticsRecord
from .driver import RunConfig, RunResult, RunStatus, standard_config, run, run_epsilon_sweep, step
from .grid import Boundary, FlowState, Grid1D, new_uniform_grid
from .hyperbolic import NewtonConfig
from .kernels import BACKEND
from .pressure import PressureParams
from .scenarios import Scenario, get_scenario, initialize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Boundary",
    "DiagnosticsRecord",
    "FlowState",
    "Grid1D",
    "NewtonConfig",
    "PressureParams",
    "RunConfig",
    "RunResult",
    "RunStatus",
    "Scenario",
    "get_scenario",
    "initialize",
    "new_uniform_grid",
    "standard_config",
    "run",
    "run_epsilon_sweep",
    "step",
]
