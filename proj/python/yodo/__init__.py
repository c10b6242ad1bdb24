"""One-way sensitivity analysis for discrete Bayesian networks.

The heavy lifting lives in the compiled extension; this package just
re-exports its public surface.
"""

from yodo._core import Network, Report, Row, load_network, parse_bif, synthesize

__all__ = [
    "Network",
    "Report",
    "Row",
    "load_network",
    "parse_bif",
    "synthesize",
]
