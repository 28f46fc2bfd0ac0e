"""Exact memory-capacity and task-performance analytics for linear
echo state networks driven by correlated inputs.

The package computes the stationary second moments of a linear reservoir in
closed form (eigendecomposition, truncated sums, or spectral integrals),
derives optimal readouts, memory functions, expected errors and worst-case
bounds from them, and validates everything against direct simulation on
delay-reconstruction, NARMA10, and Mackey-Glass benchmarks.
"""

from .analytic import (CovariancePair, MemoryCurve, cross_covariance_from_corr,
                       delay_covariance_expcorr, delay_covariance_iid,
                       memory_function, memory_function_spectral,
                       state_covariance_expcorr, state_covariance_iid,
                       state_covariance_spectral, state_covariance_sum,
                       total_memory, total_memory_spectral, truncation_k_max)
from .errors import (ConfigError, DefectiveMatrixError, DivergenceError,
                     NumericalError)
from .experiments import (ExperimentConfig, ExperimentResult, config_from_dict,
                          load_config, run_experiment, save_config,
                          write_outputs)
from .readout import (ErrorReport, Readout, analytic_readout,
                      empirical_error_stats, empirical_readout, markov_bound,
                      mse_analytic, predict)
from .reservoir import (Network, StateTrajectory, eig_decompose, input_weights,
                        network_from_json, network_to_json, randomize_links,
                        ring_network, run_reservoir, spectral_radius)
from .signals import (CorrelationFunction, Signal, SpectralDensity,
                      empirical_autocorr, empirical_crosscorr,
                      exponential_corr, frequency_grid, gen_expcorr,
                      gen_iid_uniform, psd_exponential, psd_flat, standardize)
from .tasks import (MGParams, TaskSpec, delay_target, mackey_glass, narma10,
                    prediction_pair)

__version__ = "0.1.0"
