"""Rate analysis of adaptive link selection over a buffered cognitive relay.

The closed forms live in :mod:`alsbr.rates`, the threshold solver in
:mod:`alsbr.solver` and the slot simulator in :mod:`alsbr.montecarlo`.
"""

__version__ = "0.1.0"

from .channel import (  # noqa: E402
    LinkStatistics,
    NetworkGeometry,
    SystemParams,
    derive_link_statistics,
    snr_ccdf,
    snr_cdf,
    snr_pdf,
)
from .errors import DomainError, NoSignChangeError, NonConvergenceError, QuadratureError, SolverError  # noqa: E402
from .rates import (  # noqa: E402
    BranchPolicy,
    HopPair,
    ccdf_relay_selected,
    ccdf_source_selected,
    rate_cbr,
    rate_cubr,
    rate_relay_hop,
    rate_source_hop,
)
from .solver import AlsbrSolution, SolverSpec, alsbr_rate, solve_rho  # noqa: E402

__all__ = [
    "AlsbrSolution", "BranchPolicy", "DomainError", "HopPair", "LinkStatistics", "NetworkGeometry",
    "NoSignChangeError", "NonConvergenceError", "QuadratureError", "SolverError", "SolverSpec",
    "SystemParams", "alsbr_rate", "ccdf_relay_selected", "ccdf_source_selected", "derive_link_statistics",
    "rate_cbr", "rate_cubr", "rate_relay_hop", "rate_source_hop", "snr_ccdf", "snr_cdf", "snr_pdf",
    "solve_rho",
]
