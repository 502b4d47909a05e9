"""Session graphs from web server access logs.

Parse access logs, split robot from human traffic, cut per-agent sessions,
build the resource transition graph, measure its connectivity and compare
heavy-tailed fits to its degree distributions.
"""
__version__ = "0.1.0"

from .botfilter import AgentSignatureDb, TrafficClass, classify, load_signature_db, split_stream
from .graphcore import (
    ComponentPartition,
    SessionGraph,
    build_graph,
    component_summary,
    connected_components,
    degrees,
    density,
    largest_component,
    mean_degree,
    reciprocity,
    top_k_degree_subgraph,
)
from .logparse import LogFormat, LogRecord, parse_line, parse_stream, resource_key
from .modelselect import LlrResult, compare_all, vuong_test
from .sessionizer import AgentKey, Session, TrafficSummary, sessionize, summarize
