"""Exo-SIR: an SIR variant whose infected compartment is split by origin.

Endogenous infections (i_e) arise from contact within the population;
exogenous infections (i_x) arrive from outside at rate beta_x. The package
covers the deterministic ODE model, agent-based runs on contact networks,
randomized parameter sweeps with peak regression, ingestion of observed
case-count data, rate estimation, and the with/without-exogenous
counterfactual comparison.
"""

from .errors import (ConfigError, DataError, DuplicateDateError, ExoSirError,
                     HorizonError, IntegrationError, InvalidStateError,
                     NegativeCountError, NumericalError, ParameterError,
                     ScaleError, ScalingDomainError, SchemaError,
                     SingularDesignError, UnidentifiableParameterError)
from .fitting import (FittedParams, NormalizedSeries, PeakComparison,
                      counterfactual, counterfactual_runs, estimate_params,
                      export_observed, fold_out_exogenous, normalize)
from .ingest import (IngestReport, ObservedSeries, RawCaseRecord,
                     build_observed, load_populations, merge_event_counts,
                     parse_event_counts, parse_raw_cases, parse_states_daily,
                     read_observed_csv, write_observed_csv)
from .model import (CompartmentState, ModelParams, PeakStats, SirTrajectory,
                    Trajectory, endogenous_boost_check, exo_sir_rhs, integrate,
                    integrate_sir, peak_of, sir_rhs)
from .network import (CombinationSummary, ContactGraph, NodeStatus, SimOutcome,
                      generate_ba_graph, run_experiment, run_simulation, step)
from .regression import RegressionReport, fit_linear, t_critical, t_sf_two_sided
from .sweep import (SweepSample, fit_ols, run_sweep, sample_grid,
                    scale_log_peaks)

__version__ = "0.1.0"

__all__ = [
    "CombinationSummary", "CompartmentState", "ConfigError", "ContactGraph",
    "DataError", "DuplicateDateError", "ExoSirError", "FittedParams",
    "HorizonError", "IngestReport", "IntegrationError", "InvalidStateError",
    "ModelParams", "NegativeCountError", "NodeStatus", "NormalizedSeries",
    "NumericalError", "ObservedSeries", "ParameterError", "PeakComparison",
    "PeakStats", "RawCaseRecord", "RegressionReport", "ScaleError",
    "ScalingDomainError", "SchemaError", "SimOutcome", "SingularDesignError",
    "SirTrajectory", "SweepSample", "Trajectory",
    "UnidentifiableParameterError", "build_observed", "counterfactual",
    "counterfactual_runs", "endogenous_boost_check", "estimate_params",
    "exo_sir_rhs", "export_observed", "fit_linear", "fit_ols",
    "fold_out_exogenous", "generate_ba_graph", "integrate", "integrate_sir",
    "load_populations", "merge_event_counts", "normalize",
    "parse_event_counts", "parse_raw_cases", "parse_states_daily", "peak_of",
    "read_observed_csv", "run_experiment", "run_simulation", "run_sweep",
    "sample_grid", "scale_log_peaks", "sir_rhs", "step", "t_critical",
    "t_sf_two_sided", "write_observed_csv",
]
