"""
Session graph metrics
=====================

Build the resource-transition graph from human sessions and look at its
density, reciprocity and connectivity.
"""
from pathlib import Path

from sessiongraph import botfilter, graphcore, logparse, sessionizer

data = Path(__file__).resolve().parent.parent / "tests" / "data"
records, _ = logparse.parse_stream(logparse.read_lines(data / "fixture.log"),
                                   logparse.LogFormat.from_string("proxy"))
humans, _ = botfilter.split_stream(records, botfilter.load_signature_db(data / "bots.txt"))
graph = graphcore.build_graph(sessionizer.sessionize(humans))
print(graph)

for key, value in graphcore.graph_metrics(graph).items():
    print(f"{key:26s} {value}")

# the two reciprocity readings disagree by design
print("edge ratio  ", graphcore.reciprocity(graph, "edge_ratio"))
print("pair formula", graphcore.reciprocity(graph, "pair_formula"))

print(graphcore.component_summary(graph))

# the densest corner: 8 highest-degree resources
core = graphcore.top_k_degree_subgraph(graph, 8)
k_in, k_out = graphcore.degrees(core)
for name, a, b in zip(core.resources, k_in, k_out):
    print(f"{name:24s} in={a:2d} out={b:2d}")
