"""Adjacency labeling schemes for sparse and power-law graphs."""

from .graph import (DegreeHistogram, Graph, degree_histogram, havel_hakimi, is_graphical,
                    is_induced_subgraph, load_edge_list, read_edge_list, write_edge_list)
from .labeling import (Label, LabelSet, Mode, ThresholdSweep, decode, encode, predicted_threshold,
                       powerlaw_threshold, sparse_threshold, sweep_thresholds, theoretical_bounds)
from .powerlaw import (PowerLawConstants, constants, fit_alpha_mle, verify_palpha, verify_proper,
                       zeta)

from .generators import embed_lower_bound, generate_ba, generate_powerlaw_graph, sample_powerlaw_degrees
from .report import ExperimentReport, build_report

__version__ = "0.1.0"
