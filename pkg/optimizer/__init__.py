"""
离散相位反射设计
"""
from core.reflection import quantize_levels, quantize_to_alphabet
from optimizer.benchmarks import csm_select, exhaustive_oracle, rms_select
from optimizer.objective import batch_objective, check_psd, quadratic_objective
from optimizer.pipeline import (
    ESTIMATION_METHODS,
    Method,
    OptimizationResult,
    evaluate_snr,
    evaluate_snr_db,
    optimize_reflection,
    result_to_dict,
)
from optimizer.randomization import gaussian_randomization
from optimizer.refinement import successive_refinement
from optimizer.sdr import SdrSolution, default_rank_cap, solve_sdr_relaxation

__all__ = [
    "SdrSolution",
    "solve_sdr_relaxation",
    "default_rank_cap",
    "gaussian_randomization",
    "quantize_to_alphabet",
    "quantize_levels",
    "successive_refinement",
    "csm_select",
    "rms_select",
    "exhaustive_oracle",
    "quadratic_objective",
    "batch_objective",
    "check_psd",
    "Method",
    "ESTIMATION_METHODS",
    "OptimizationResult",
    "optimize_reflection",
    "evaluate_snr",
    "evaluate_snr_db",
    "result_to_dict",
]
