"""Stabilizer codes to graph codes to cluster-state measurement patterns, with a
tableau simulator and a statevector oracle for checking every step."""

from .codes import (
    AugmentedGraph,
    GraphCode,
    LocalCliffordCircuit,
    LogicalOps,
    augment,
    codeword,
    graph_of,
    logical_operators,
    standard_form,
)
from .engine import FramedGraphState, contract_chain, measure_X, measure_Y, measure_Z, realize
from .graphs import Graph, local_complement
from .lattice import LatticeSpec, MeasurementPattern, PatternMetrics, compile_graph, crossing_gadget, metrics
from .runtime import EncodingJob, ExecutionTrace, encode_state, execute, verify_graph_state
from .symplectic import BitMatrix, CheckMatrix, PauliOp, multiply, rref, symplectic_product
from .tableau import OutcomeSource, Tableau, prepare_graph_state, tableau_equiv

__all__ = [
    "AugmentedGraph", "BitMatrix", "CheckMatrix", "EncodingJob", "ExecutionTrace", "FramedGraphState",
    "Graph", "GraphCode", "LatticeSpec", "LocalCliffordCircuit", "LogicalOps", "MeasurementPattern",
    "OutcomeSource", "PatternMetrics", "PauliOp", "Tableau", "augment", "codeword", "compile_graph",
    "contract_chain", "crossing_gadget", "encode_state", "execute", "graph_of", "local_complement",
    "logical_operators", "measure_X", "measure_Y", "measure_Z", "metrics", "multiply", "prepare_graph_state",
    "realize", "rref", "standard_form", "symplectic_product", "tableau_equiv", "verify_graph_state",
]
