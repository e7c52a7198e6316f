"""Simulation, moment theory and estimation for GQARCH volatility models."""

from .coeffs import CoefficientSeq, finite_coeffs, gamma_smooth, norm_Bp, phi_coeffs, power_law_coeffs
from .conditions import ConditionReport, check_all, stationarity_report
from .estimate import FitResult, QMLEVolatilityModel, qmle_fit
from .exceptions import (ConditionError, ConvergenceError, DegenerateSeriesError, DivergenceError,
                         DomainError, GqarchError)
from .experiment import ExperimentConfig, ExperimentReport, histogram_export, run_experiment
from .leverage import SignClass, classify_signs, solve_leverage
from .models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, InnovationSpec, LarchSpec,
                     sentana_map, sp500_fixture)
from .moments import garch11_moments, gqarch_m2, lm_asymptotics
from .simulate import SimConfig, Trajectory, simulate

__version__ = "0.1.0"

__all__ = [
    "AsymGarch11Spec", "CoefficientSeq", "ConditionError", "ConditionReport", "ConvergenceError",
    "DegenerateSeriesError", "DivergenceError", "DomainError", "ExperimentConfig",
    "ExperimentReport", "FitResult", "Garch11Spec", "GqarchError", "GqarchSpec",
    "InnovationSpec", "LarchSpec", "QMLEVolatilityModel", "SignClass", "SimConfig", "Trajectory",
    "check_all", "classify_signs", "finite_coeffs", "gamma_smooth", "garch11_moments",
    "gqarch_m2", "histogram_export", "lm_asymptotics", "norm_Bp", "phi_coeffs",
    "power_law_coeffs", "qmle_fit", "run_experiment", "sentana_map", "simulate",
    "solve_leverage", "sp500_fixture", "stationarity_report",
]
