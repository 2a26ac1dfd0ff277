# pylint: disable=missing-docstring
from .base import Analyser, Debugger, find_output
from .metrics import ThresholdVerdict, ThresholdSettings, MetricsReport
from .metrics import compute_window, effective_threshold_check, build_report, timing_violations
from .metrics import outcome_counts, window_stats, record_composition, residual_depolarizing_rate
from .run_analysers import OutcomeAnalyser, ComputeWindowAnalyser, ErasureCompositionAnalyser
from .run_analysers import TimingContractAnalyser, ConservationAnalyser, ThresholdAnalyser
from .run_analysers import MetricsReportAnalyser, default_analysers
