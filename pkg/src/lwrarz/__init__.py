"""Two-phase LWR/ARZ traffic model with a flow constraint at x = 0.

The unconstrained Riemann solvers R1 and R2 and their constrained variants
R1c and R2c return :class:`WaveFan` objects that can be evaluated, sampled
and checked with the routines in :mod:`lwrarz.verification`.
"""

from .classic import solve_arz, solve_lwr
from .constrained import (
    ConstraintProblem,
    classify,
    flow_max_oracle,
    get_solver,
    select_traces,
    solve_constrained,
    solve_r1c,
    solve_r2c,
)
from .errors import LWRARZError
from .fan import Kind, Wave, WaveFan, l1_distance, validate_fan
from .instances import ref1, ref2
from .model import Model, Phase, State, build_model, sigma
from .two_phase import solve_r1, solve_r2

__all__ = [
    "ConstraintProblem",
    "Kind",
    "LWRARZError",
    "Model",
    "Phase",
    "State",
    "Wave",
    "WaveFan",
    "build_model",
    "classify",
    "flow_max_oracle",
    "get_solver",
    "l1_distance",
    "ref1",
    "ref2",
    "select_traces",
    "sigma",
    "solve_arz",
    "solve_constrained",
    "solve_lwr",
    "solve_r1",
    "solve_r1c",
    "solve_r2",
    "solve_r2c",
    "validate_fan",
]
