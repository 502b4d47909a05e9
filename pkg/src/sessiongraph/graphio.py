"""Flat-file exports of session graphs (CSV edge list, node table, GraphML)."""
from __future__ import annotations

import csv
import xml.etree.ElementTree as ET

import numpy as np

from .graphcore import SessionGraph, degrees

EDGE_HEADER = ("src_id", "dst_id", "weight")
NODE_HEADER = ("id", "resource", "requests", "in_degree", "out_degree")
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def write_edgelist(graph: SessionGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EDGE_HEADER)
        w.writerows(zip(graph.src.tolist(), graph.dst.tolist(), graph.weight.tolist()))


def write_nodes(graph: SessionGraph, path) -> None:
    k_in, k_out = degrees(graph)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(NODE_HEADER)
        for i, res in enumerate(graph.resources):
            w.writerow((i, res, int(graph.requests[i]), int(k_in[i]), int(k_out[i])))


def read_graph(nodes_path, edges_path) -> SessionGraph:
    """Inverse of write_nodes + write_edgelist (per-node self-loop tallies are not stored)."""
    with open(nodes_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    rows.sort(key=lambda r: int(r["id"]))
    if [int(r["id"]) for r in rows] != list(range(len(rows))):
        raise ValueError(f"{nodes_path}: node ids must be 0..n-1")
    resources = [r["resource"] for r in rows]
    requests = [int(r["requests"]) for r in rows]
    with open(edges_path, newline="", encoding="utf-8") as fh:
        edges = [(int(r["src_id"]), int(r["dst_id"]), int(r["weight"])) for r in csv.DictReader(fh)]
    arr = np.array(edges, dtype=np.int64).reshape(-1, 3)
    return SessionGraph(resources, arr[:, 0], arr[:, 1], arr[:, 2], requests,
                        np.zeros(len(resources), dtype=np.int64))


def read_degree_column(path, direction: str) -> np.ndarray:
    """Degrees from a node table (``in_degree``/``out_degree``) or a bare ``degree`` column."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        column = f"{direction}_degree" if f"{direction}_degree" in fields else "degree"
        if column not in fields:
            raise ValueError(f"{path}: no '{direction}_degree' or 'degree' column")
        return np.array([int(r[column]) for r in reader], dtype=np.int64)


def write_graphml(graph: SessionGraph, path) -> None:
    ET.register_namespace("", GRAPHML_NS)
    root = ET.Element(f"{{{GRAPHML_NS}}}graphml")
    for key_id, domain, name, typ in (
        ("d0", "node", "resource", "string"),
        ("d1", "node", "requests", "long"),
        ("d2", "edge", "weight", "long"),
    ):
        ET.SubElement(root, f"{{{GRAPHML_NS}}}key",
                      {"id": key_id, "for": domain, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, f"{{{GRAPHML_NS}}}graph", {"id": "G", "edgedefault": "directed"})
    for i, res in enumerate(graph.resources):
        node = ET.SubElement(g, f"{{{GRAPHML_NS}}}node", {"id": f"n{i}"})
        ET.SubElement(node, f"{{{GRAPHML_NS}}}data", {"key": "d0"}).text = res
        ET.SubElement(node, f"{{{GRAPHML_NS}}}data", {"key": "d1"}).text = str(int(graph.requests[i]))
    for s, d, w in zip(graph.src.tolist(), graph.dst.tolist(), graph.weight.tolist()):
        edge = ET.SubElement(g, f"{{{GRAPHML_NS}}}edge", {"source": f"n{s}", "target": f"n{d}"})
        ET.SubElement(edge, f"{{{GRAPHML_NS}}}data", {"key": "d2"}).text = str(w)
    ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
