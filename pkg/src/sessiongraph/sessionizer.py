"""Gap-threshold sessionization and traffic summaries."""
from __future__ import annotations

import csv
import hashlib
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .logparse import LogRecord, resource_key

DEFAULT_CUTOFF = 1800


class AgentKey(NamedTuple):
    user_agent: Optional[str]
    client_ip: Optional[str]

    @classmethod
    def of(cls, record: LogRecord) -> "AgentKey":
        return cls(record.user_agent, record.client_ip)

    def sort_key(self):
        # absent sorts before present so None never meets str in a comparison
        return (self.user_agent is not None, self.user_agent or "",
                self.client_ip is not None, self.client_ip or "")

    def digest(self) -> str:
        ua = "\x00" if self.user_agent is None else self.user_agent
        ip = "\x00" if self.client_ip is None else self.client_ip
        return hashlib.sha256(f"{ua}\x1f{ip}".encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Session:
    agent: AgentKey
    requests: tuple[tuple[str, int], ...]

    def __len__(self):
        return len(self.requests)

    @property
    def resources(self) -> list[str]:
        return [r for r, _ in self.requests]

    @property
    def start(self) -> int:
        return self.requests[0][1]

    @property
    def end(self) -> int:
        return self.requests[-1][1]


@dataclass(frozen=True)
class TrafficSummary:
    request_count: int
    session_count: int
    agent_count: int
    ip_count: int
    resource_count: int
    start_time: Optional[int]
    end_time: Optional[int]

    def to_dict(self) -> dict:
        return {
            "requests": self.request_count,
            "sessions": self.session_count,
            "agents": self.agent_count,
            "ips": self.ip_count,
            "resources": self.resource_count,
            "start_time": self.start_time,
            "end_time": self.end_time,
        }


def sessionize(
    records: Iterable[LogRecord],
    cutoff: float = DEFAULT_CUTOFF,
    normalization: str = "verbatim",
) -> list[Session]:
    """Split each agent's requests wherever consecutive requests are ``cutoff`` or more apart.

    Requests are grouped by (user agent, client ip) and stably sorted by
    timestamp, so equal timestamps keep their input order. Sessions come out
    grouped by agent in a fixed key order, chronologically within an agent.
    """
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")

    by_agent: dict[AgentKey, list[tuple[str, int]]] = defaultdict(list)
    for rec in records:
        by_agent[AgentKey.of(rec)].append((resource_key(rec, normalization), rec.timestamp))

    sessions = []
    for agent in sorted(by_agent, key=AgentKey.sort_key):
        reqs = sorted(by_agent[agent], key=lambda rt: rt[1])
        current = [reqs[0]]
        for prev, req in zip(reqs, reqs[1:]):
            if req[1] - prev[1] >= cutoff:
                sessions.append(Session(agent, tuple(current)))
                current = []
            current.append(req)
        sessions.append(Session(agent, tuple(current)))
    return sessions


def summarize(records: Sequence[LogRecord], sessions: Sequence[Session]) -> TrafficSummary:
    agents = {AgentKey.of(r) for r in records}
    ips = {r.client_ip for r in records if r.client_ip is not None}
    resources = {res for s in sessions for res, _ in s.requests}
    times = [r.timestamp for r in records]
    return TrafficSummary(
        request_count=len(records),
        session_count=len(sessions),
        agent_count=len(agents),
        ip_count=len(ips),
        resource_count=len(resources),
        start_time=min(times) if times else None,
        end_time=max(times) if times else None,
    )


SESSION_CSV_HEADER = ("session_id", "agent_hash", "start_ts", "length")


def write_sessions_csv(sessions: Sequence[Session], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SESSION_CSV_HEADER)
        for i, s in enumerate(sessions):
            w.writerow((i, s.agent.digest(), s.start, len(s)))
