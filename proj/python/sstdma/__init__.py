"""Self-stabilizing TDMA slot allocation: simulator and convergence bounds."""

from ._core import (
    FrameConfig,
    GraphStats,
    InterferenceGraph,
    RunResult,
    World,
    chain_s,
    expected_retransmissions,
    expected_winners_lb,
    expected_winners_lb_compact,
    generate_rgg,
    global_bound,
    load_graph,
    load_graph_file,
    local_bound_eq3,
    local_bound_from_q,
    only_one_lb,
    only_one_lb_rho,
    q_lb,
    rounds_for_confidence,
    save_graph,
    save_graph_file,
    stationary,
    tmax_cdf_bound,
)

__all__ = [
    "FrameConfig",
    "GraphStats",
    "InterferenceGraph",
    "RunResult",
    "World",
    "chain_s",
    "expected_retransmissions",
    "expected_winners_lb",
    "expected_winners_lb_compact",
    "generate_rgg",
    "global_bound",
    "load_graph",
    "load_graph_file",
    "local_bound_eq3",
    "local_bound_from_q",
    "only_one_lb",
    "only_one_lb_rho",
    "q_lb",
    "rounds_for_confidence",
    "save_graph",
    "save_graph_file",
    "stationary",
    "tmax_cdf_bound",
]
