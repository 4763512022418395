"""Exact and sampled statistics of uniform linear extensions of finite
posets: balance constants, windows, heights, polytope quantities, and
verification sweeps of the related theorems and conjectures."""

from .balance import (BalanceReport, balance_report, delta_k,
                      evaluate_fractional_matching, fractional_matching_report,
                      gap_chain, is_diffuse, trend_report)
from .counting import (ExtensionStats, IdealLattice, build_lattice,
                       count_extensions, enumerate_extensions, exact_stats,
                       order_probability, precedence_probability,
                       rank_distribution)
from .errors import (BudgetExceeded, CycleError, DomainError, EnumCapExceeded,
                     IdealCapExceeded, InconsistentRelation, InvalidMatching,
                     LinextError, NoFeasibleKL, NotAChain, ParseError,
                     SizeCapExceeded, StatUnavailable)
from .families import (antichain, bit_example, catalog, catalog_up_to, chain,
                       example_11_1, example_11_2, komlos_chains, random_poset,
                       solve_11_2)
from .geometry import (GeometryReport, check_corner_bounds,
                       check_win_variance_inequalities, conjecture_winvar_ratio,
                       geometry_report)
from .poset import Poset, bits, mask_of, parallel_sum, series_sum
from .report import CheckReport
from .sampling import (Estimate, ExtensionSampler, PolytopePoint, SampleStream,
                       estimate_event, estimate_win, sample_extension_exact,
                       sample_extension_mcmc, sample_order_polytope_point,
                       transfer_map)

__version__ = "0.1.0"
