"""End-to-end orchestration: logs in, report JSON and flat exports out.

Each stage has an in-memory function and a file layout, so ``run`` and the
one-stage-at-a-time CLI produce the same report. Work directory layout::

    out/records.jsonl  parse_errors.csv  parse.json  split.json  config.json
    out/report.json
    out/<human|robot>/records.jsonl  sessions.jsonl  sessions.csv  summary.json
                      nodes.csv  edges.csv  graph.json  config.json
                      fit_in.json  fit_out.json  freq_in.csv  freq_out.csv
                      compare_in.json  compare_in.csv  ...
"""
from __future__ import annotations

import csv
import glob
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import __version__, jsonio
from .botfilter import AgentSignatureDb, count_unidentified, load_signature_db, split_stream
from .errors import ConfigError, DegenerateSample, InputError, NonConvergence, SessionGraphError
from .graphcore import (SessionGraph, build_graph, component_summary, degrees, graph_metrics,
                        largest_component, top_k_degree_subgraph)
from .graphio import read_degree_column, read_graph, write_edgelist, write_graphml, write_nodes
from .logparse import DEFAULT_FORMAT, LogFormat, LogRecord, parse_stream, read_lines
from .modelselect import compare_available, write_comparisons_csv
from .sessionizer import (DEFAULT_CUTOFF, AgentKey, Session, sessionize, summarize,
                          write_sessions_csv)
from .statfit import (FITTERS, FitResult, TailSample, estimate_xmin, fit_dpln, frequency_table,
                      write_frequency_csv, zeta_ks_distance)

log = logging.getLogger(__name__)

CLASSES = ("human", "robot")
DIRECTIONS = ("in", "out")
EXPORTS = ("edgelist", "frequency", "sessions", "graphml")
DEFAULT_EXPORTS = ("edgelist", "frequency", "sessions")

XminMode = Union[str, int]


@dataclass
class RunConfig:
    inputs: Sequence[str]
    out_dir: str = "out"
    log_format: str = DEFAULT_FORMAT
    bots_db: Optional[str] = None
    cutoff: int = DEFAULT_CUTOFF
    normalization: str = "verbatim"
    xmin: XminMode = "auto"
    seed: int = 0
    exports: Sequence[str] = DEFAULT_EXPORTS
    top_k: int = 5000

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("at least one input path is required")
        if not self.cutoff > 0:
            raise ConfigError("session cutoff must be positive")
        if self.normalization not in ("verbatim", "strip-query"):
            raise ConfigError(f"unknown path normalization {self.normalization!r}")
        parse_xmin(self.xmin)
        unknown = set(self.exports) - set(EXPORTS)
        if unknown:
            raise ConfigError(f"unknown exports {sorted(unknown)}")
        if self.top_k < 1:
            raise ConfigError("top_k must be at least 1")
        try:
            LogFormat.from_string(self.log_format)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def parse_xmin(value: XminMode) -> XminMode:
    """``"auto"`` or a fixed integer cut-off >= 1 (also accepts ``"fixed:N"``)."""
    if value == "auto":
        return "auto"
    text = str(value)
    if text.startswith("fixed:"):
        text = text[len("fixed:"):]
    try:
        x = int(text)
    except ValueError:
        raise ConfigError(f"xmin must be 'auto' or an integer, got {value!r}") from None
    if x < 1:
        raise ConfigError("fixed xmin must be at least 1")
    return x


# ---------------------------------------------------------------- parse / split

def expand_inputs(patterns: Sequence[str]) -> list[str]:
    """Resolve globs; files are processed in sorted name order."""
    files = set()
    for pat in patterns:
        if glob.has_magic(pat):
            matched = glob.glob(pat)
            if not matched:
                raise InputError(f"no input matches {pat}")
            files.update(matched)
        else:
            if not os.path.isfile(pat):
                raise InputError(f"cannot read input {pat}")
            files.add(pat)
    return sorted(files)


def parse_files(files: Sequence[str], fmt: LogFormat):
    records, errors, lines = [], [], 0
    for path in files:
        try:
            text = read_lines(path)
        except OSError as exc:
            raise InputError(f"cannot read input {path}: {exc.strerror}") from exc
        recs, errs = parse_stream(text, fmt)
        lines += len(text)
        records.extend(recs)
        errors.extend((path, n, f"{type(e).__name__}: {e}") for n, e in errs)
    return records, errors, lines


def write_records(records: Sequence[LogRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def read_records(path) -> list[LogRecord]:
    with open(path, encoding="utf-8") as fh:
        return [LogRecord.from_dict(json.loads(line)) for line in fh if line.strip()]


def write_parse_errors(errors, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("file", "line", "error"))
        w.writerows(errors)


def write_sessions_jsonl(sessions: Sequence[Session], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in sessions:
            fh.write(json.dumps({"agent": list(s.agent), "requests": [list(r) for r in s.requests]},
                                ensure_ascii=False) + "\n")


def read_sessions_jsonl(path) -> list[Session]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                d = json.loads(line)
                out.append(Session(AgentKey(*d["agent"]), tuple((r, int(t)) for r, t in d["requests"])))
    return out


def update_config(directory, **values) -> None:
    path = Path(directory) / "config.json"
    current = jsonio.load(path) if path.exists() else {}
    current.update(values)
    jsonio.dump(current, path)


# ---------------------------------------------------------------- degree fitting

def _fit_or_error(fn, *args) -> Union[FitResult, str]:
    try:
        return fn(*args)
    except (SessionGraphError, ArithmeticError, ValueError) as exc:
        return f"{type(exc).__name__}: {exc}"


def fit_direction(degree_values, direction: str, xmin_mode: XminMode = "auto"):
    """Fit all four candidates to one degree direction.

    Returns ``(stanza, sample, fits)``; ``sample`` and ``fits`` are None when
    the degrees are too degenerate to fit at all.
    """
    deg = np.asarray(degree_values, dtype=np.int64)
    positive = deg[deg > 0]
    stanza = {
        "direction": direction,
        "n_values": int(len(deg)),
        "n_zero": int(np.count_nonzero(deg == 0)),
        "xmin_mode": "auto" if xmin_mode == "auto" else "fixed",
    }
    try:
        if xmin_mode == "auto":
            est = estimate_xmin(positive)
            xmin, ks = est.xmin, est.ks_distance
        else:
            xmin, ks = int(xmin_mode), None
        sample = TailSample(positive, xmin)
    except DegenerateSample as exc:
        stanza.update({"error": f"DegenerateSample: {exc}", "xmin": None if xmin_mode == "auto" else int(xmin_mode)})
        return stanza, None, None

    fits, fit_dicts = {}, {}
    for kind, fitter in FITTERS.items():
        res = _fit_or_error(fitter, sample)
        if isinstance(res, FitResult):
            fits[kind] = res
            fit_dicts[kind] = res.to_dict()
        else:
            fit_dicts[kind] = {"kind": kind, "error": res}
    if ks is None and "zeta" in fits:
        ks = zeta_ks_distance(sample.tail, fits["zeta"].params["alpha"], xmin)

    whole = _fit_or_error(fit_dpln, TailSample(positive, 1)) if len(positive) else "DegenerateSample: no positive degrees"
    stanza.update({
        "xmin": int(xmin),
        "ks_distance": ks,
        "n_tail": sample.n_tail,
        "fits": fit_dicts,
        "dpln_all_degrees": whole.to_dict() if isinstance(whole, FitResult) else {"kind": "dpln", "error": whole},
    })
    return stanza, sample, fits


def fits_from_stanza(stanza: dict, degree_values):
    deg = np.asarray(degree_values, dtype=np.int64)
    if "error" in stanza:
        return None, None
    sample = TailSample(deg[deg > 0], stanza["xmin"])
    fits = {k: FitResult.from_dict(d) for k, d in stanza["fits"].items() if "error" not in d}
    return sample, fits


def compare_direction(sample, fits, direction: str) -> list:
    if sample is None:
        return []
    return compare_available(sample, fits, direction)


# ---------------------------------------------------------------- per-class analysis

def _graph_stanza(graph: SessionGraph) -> dict:
    return {"graph": graph_metrics(graph), "components": component_summary(graph)}


def analyze_class(records: Sequence[LogRecord], config: RunConfig, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    sessions = sessionize(records, config.cutoff, config.normalization)
    summary = summarize(records, sessions)
    if "sessions" in config.exports:
        write_sessions_csv(sessions, out / "sessions.csv")
    if not sessions:
        return {"empty": True, "summary": summary.to_dict()}

    graph = build_graph(sessions)
    stanza = {"empty": False, "summary": summary.to_dict(), **_graph_stanza(graph)}
    if "edgelist" in config.exports:
        write_nodes(graph, out / "nodes.csv")
        write_edgelist(graph, out / "edges.csv")
    if "graphml" in config.exports:
        export_graphml(graph, out, config.top_k)

    k_in, k_out = degrees(graph)
    stanza["degrees"] = {}
    for direction, values in zip(DIRECTIONS, (k_in, k_out)):
        d_stanza, sample, fits = fit_direction(values, direction, config.xmin)
        d_stanza["comparisons"] = [r.to_dict() for r in compare_direction(sample, fits, direction)]
        stanza["degrees"][direction] = d_stanza
        if "frequency" in config.exports:
            write_frequency_csv(frequency_table(values), out / f"freq_{direction}.csv")
    return stanza


def export_graphml(graph: SessionGraph, out: Path, top_k: int) -> None:
    write_graphml(graph, out / "graph.graphml")
    if graph.n_nodes:
        core = largest_component(top_k_degree_subgraph(graph, top_k), "weak")
        write_graphml(core, out / f"top{top_k}_largest_wcc.graphml")


def config_echo(config: RunConfig, files: Sequence[str]) -> dict:
    return {
        "inputs": list(config.inputs),
        "files": list(files),
        "format": str(LogFormat.from_string(config.log_format)),
        "bots_db": config.bots_db,
        "cutoff": config.cutoff,
        "normalization": config.normalization,
        "xmin": parse_xmin(config.xmin),
        "seed": config.seed,
    }


def assemble_report(config: dict, parse_info: dict, split_info: dict, stanzas: dict) -> dict:
    return {
        "tool": {"name": "sessiongraph", "version": __version__},
        "config": config,
        "parse": parse_info,
        "split": split_info,
        **{cls: stanzas[cls] for cls in CLASSES},
    }


def run(config: RunConfig) -> dict:
    """Parse, split, sessionize, build graphs, fit and compare; write ``report.json``."""
    config.validate()
    config.xmin = parse_xmin(config.xmin)
    fmt = LogFormat.from_string(config.log_format)
    files = expand_inputs(config.inputs)
    db = load_signature_db(config.bots_db) if config.bots_db else AgentSignatureDb()

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, errors, lines = parse_files(files, fmt)
    write_parse_errors(errors, out / "parse_errors.csv")
    humans, robots = split_stream(records, db)

    parse_info = {"lines": lines, "records": len(records), "errors": len(errors)}
    split_info = {"human": len(humans), "robot": len(robots), "unidentified": count_unidentified(records)}
    stanzas = {cls: analyze_class(recs, config, out / cls) for cls, recs in zip(CLASSES, (humans, robots))}
    report = assemble_report(config_echo(config, files), parse_info, split_info, stanzas)
    jsonio.dump(report, out / "report.json")
    return report


# ---------------------------------------------------------------- single stages (CLI)

def stage_parse(inputs: Sequence[str], log_format: str, out_dir) -> dict:
    fmt = LogFormat.from_string(log_format)
    files = expand_inputs(inputs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, errors, lines = parse_files(files, fmt)
    write_records(records, out / "records.jsonl")
    write_parse_errors(errors, out / "parse_errors.csv")
    info = {"lines": lines, "records": len(records), "errors": len(errors)}
    jsonio.dump(info, out / "parse.json")
    update_config(out, inputs=list(inputs), files=files, format=str(fmt))
    return info


def stage_split(records_path, bots_db: Optional[str], out_dir) -> dict:
    records = read_records(records_path)
    db = load_signature_db(bots_db) if bots_db else AgentSignatureDb()
    humans, robots = split_stream(records, db)
    out = Path(out_dir)
    for cls, recs in zip(CLASSES, (humans, robots)):
        (out / cls).mkdir(parents=True, exist_ok=True)
        write_records(recs, out / cls / "records.jsonl")
    info = {"human": len(humans), "robot": len(robots), "unidentified": count_unidentified(records)}
    jsonio.dump(info, out / "split.json")
    update_config(out, bots_db=bots_db)
    return info


def stage_sessionize(records_path, cutoff: int, normalization: str, out_dir) -> dict:
    if not cutoff > 0:
        raise ConfigError("session cutoff must be positive")
    records = read_records(records_path)
    sessions = sessionize(records, cutoff, normalization)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_sessions_jsonl(sessions, out / "sessions.jsonl")
    write_sessions_csv(sessions, out / "sessions.csv")
    summary = summarize(records, sessions).to_dict()
    jsonio.dump(summary, out / "summary.json")
    update_config(out, cutoff=cutoff, normalization=normalization)
    return summary


def stage_graph(sessions_path, out_dir) -> dict:
    graph = build_graph(read_sessions_jsonl(sessions_path))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_nodes(graph, out / "nodes.csv")
    write_edgelist(graph, out / "edges.csv")
    stanza = _graph_stanza(graph)
    jsonio.dump(stanza, out / "graph.json")
    return stanza


def stage_fit(degrees_path, direction: str, xmin: XminMode, seed: int, out_dir) -> dict:
    xmin = parse_xmin(xmin)
    values = read_degree_column(degrees_path, direction)
    stanza, _, _ = fit_direction(values, direction, xmin)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jsonio.dump(stanza, out / f"fit_{direction}.json")
    write_frequency_csv(frequency_table(values), out / f"freq_{direction}.csv")
    update_config(out, xmin=xmin, seed=seed)
    return stanza


def stage_compare(degrees_path, fits_path, out_dir) -> list:
    stanza = jsonio.load(fits_path)
    direction = stanza["direction"]
    sample, fits = fits_from_stanza(stanza, read_degree_column(degrees_path, direction))
    results = compare_direction(sample, fits, direction)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [r.to_dict() for r in results]
    jsonio.dump(rows, out / f"compare_{direction}.json")
    write_comparisons_csv(results, out / f"compare_{direction}.csv")
    return rows


def _load_required(path: Path):
    if not path.exists():
        raise InputError(f"missing stage output {path}")
    return jsonio.load(path)


def stage_export(workdir, exports: Sequence[str] = (), top_k: int = 5000) -> dict:
    """Assemble ``report.json`` from stage outputs in ``workdir``."""
    work = Path(workdir)
    config = {}
    for cfg in [work / "config.json"] + [work / cls / "config.json" for cls in CLASSES]:
        if cfg.exists():
            config.update(jsonio.load(cfg))
    stanzas = {}
    for cls in CLASSES:
        d = work / cls
        summary = _load_required(d / "summary.json")
        if summary["sessions"] == 0:
            stanzas[cls] = {"empty": True, "summary": summary}
            continue
        stanza = {"empty": False, "summary": summary, **_load_required(d / "graph.json"), "degrees": {}}
        for direction in DIRECTIONS:
            fit = _load_required(d / f"fit_{direction}.json")
            fit["comparisons"] = _load_required(d / f"compare_{direction}.json")
            stanza["degrees"][direction] = fit
        stanzas[cls] = stanza
        if "graphml" in exports:
            export_graphml(read_graph(d / "nodes.csv", d / "edges.csv"), d, top_k)
    echo = {k: config.get(k) for k in ("inputs", "files", "format", "bots_db", "cutoff",
                                       "normalization", "xmin", "seed")}
    report = assemble_report(echo, _load_required(work / "parse.json"),
                             _load_required(work / "split.json"), stanzas)
    jsonio.dump(report, work / "report.json")
    return report
