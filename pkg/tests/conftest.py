from pathlib import Path

import numpy as np
import pytest

from sessiongraph.graphcore import SessionGraph, build_graph
from sessiongraph.sessionizer import AgentKey, Session

DATA = Path(__file__).parent / "data"
SEED = 2016

SAMPLE_LINE = ('- - [02/Apr/2016:00:00:09 -0400] "GET /path/to/some/resource HTTP/1.1" 200  '
              '5972 "http://www.example.com/refererpage.html" '
              '"Mozilla/5.0 (iPhone; CPU iPhone OS 7_0 like Mac OS X)" "11.111.111.111"')


def sessions_of(*paths):
    """Sessions from resource sequences; one agent, one second apart."""
    agent = AgentKey("ua", "1.1.1.1")
    return [Session(agent, tuple((r, i) for i, r in enumerate(p))) for p in paths]


def graph_of(*paths):
    return build_graph(sessions_of(*paths))


def random_digraph(rng, n, p):
    """SessionGraph with nodes 'v00'.. and independent edges of probability p."""
    names = [f"v{i:02d}" for i in range(n)]
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    return SessionGraph(names, src, dst, np.ones(len(src)), np.ones(n), np.zeros(n)), mask


def closure_partition(A, weak):
    """Component labels from a Floyd-Warshall transitive closure."""
    n = len(A)
    R = A.astype(bool) | np.eye(n, dtype=bool)
    if weak:
        R = R | R.T
    for k in range(n):
        R = R | (R[:, [k]] & R[[k], :])
    same = R & R.T
    labels = np.full(n, -1)
    nxt = 0
    for i in range(n):
        if labels[i] < 0:
            labels[same[i]] = nxt
            nxt += 1
    return labels


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


FIXTURE_LOG = DATA / "fixture.log"
FIXTURE_BOTS = DATA / "bots.txt"


def fixture_argv(out, *extra):
    return ["run", str(FIXTURE_LOG), "--format", "proxy", "--bots-db", str(FIXTURE_BOTS),
            "--out", str(out), *extra]


def report_counts(report):
    """Flatten a report into the layout of fixture.expected.json."""
    flat = {
        "cutoff": report["config"]["cutoff"],
        "lines": report["parse"]["lines"],
        "records": report["parse"]["records"],
        "errors": report["parse"]["errors"],
    }
    for cls in ("human", "robot"):
        stanza = report[cls]
        flat[cls] = {**stanza["summary"], **stanza["components"],
                     **{k: stanza["graph"][k] for k in ("nodes", "edges", "self_loops")}}
    return flat


# one (number, title, passed, detail) entry per acceptance criterion that ran
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f" ({detail})" if detail else ""))
