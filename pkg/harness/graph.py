"""
LangGraph Trial Pipeline

Builds the StateGraph that runs one VQE trial:

    init_parameters -> optimize -> final_readout -> recalculate -> finalize

Every node before finalize may set ``error``; the conditional edges then
skip straight to finalize, which emits a failed record.
"""

from functools import lru_cache

from langgraph.graph import END, StateGraph

from core.graph_state import TrialState
from harness.nodes import (
    final_readout_node,
    finalize_node,
    init_parameters_node,
    optimize_node,
    recalculate_node,
)

TRIAL_STAGES = ("init_parameters", "optimize", "final_readout", "recalculate")


def _route_after(next_node: str):
    def route(state: TrialState) -> str:
        return "finalize" if state.get("error") else next_node
    return route


def build_trial_graph():
    """Compile the trial graph."""
    graph = StateGraph(TrialState)

    graph.add_node("init_parameters", init_parameters_node)
    graph.add_node("optimize", optimize_node)
    graph.add_node("final_readout", final_readout_node)
    graph.add_node("recalculate", recalculate_node)
    graph.add_node("finalize", finalize_node)

    graph.set_entry_point("init_parameters")

    followers = TRIAL_STAGES[1:] + ("finalize",)
    for stage, follower in zip(TRIAL_STAGES, followers):
        graph.add_conditional_edges(
            stage,
            _route_after(follower),
            {follower: follower, "finalize": "finalize"},
        )

    graph.add_edge("finalize", END)
    return graph.compile()


@lru_cache(maxsize=1)
def get_trial_graph():
    """Compiled graph, built once per process."""
    return build_trial_graph()
