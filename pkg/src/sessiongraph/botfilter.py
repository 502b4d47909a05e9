"""Robot/human traffic split driven by a signature list.

Signature file layout::

    # comment
    [ua]
    Googlebot
    bingbot
    [ip]
    66.249.66.1
    157.55.39.0/24

User-agent entries match as case-insensitive substrings. IP entries match
exactly or by CIDR block.
"""
from __future__ import annotations

import enum
import ipaddress
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import BadCidr, BadSection
from .logparse import LogRecord


class TrafficClass(enum.Enum):
    ROBOT = "robot"
    HUMAN = "human"


@dataclass(frozen=True)
class AgentSignatureDb:
    ua_substrings: frozenset[str] = field(default_factory=frozenset)
    ip_exact: frozenset[str] = field(default_factory=frozenset)
    ip_cidr: tuple = ()

    def __post_init__(self):
        lowered = frozenset(s.lower() for s in self.ua_substrings)
        if any(not s for s in lowered):
            raise ValueError("user-agent substrings must be non-empty")
        object.__setattr__(self, "ua_substrings", lowered)
        nets = tuple(sorted({ipaddress.ip_network(n) if isinstance(n, str) else n
                             for n in self.ip_cidr}, key=str))
        object.__setattr__(self, "ip_cidr", nets)

    def __len__(self):
        return len(self.ua_substrings) + len(self.ip_exact) + len(self.ip_cidr)

    def matches_agent(self, user_agent: Optional[str]) -> bool:
        if not user_agent:
            return False
        ua = user_agent.lower()
        return any(s in ua for s in self.ua_substrings)

    def matches_ip(self, client_ip: Optional[str]) -> bool:
        if not client_ip:
            return False
        if client_ip in self.ip_exact:
            return True
        if not self.ip_cidr:
            return False
        try:
            addr = ipaddress.ip_address(client_ip)
        except ValueError:
            return False
        return any(addr in net for net in self.ip_cidr)


def _parse_network(entry: str, line_no: int):
    try:
        return ipaddress.ip_network(entry, strict=False)
    except ValueError as exc:
        raise BadCidr(f"line {line_no}: invalid CIDR block {entry!r}") from exc


def parse_signature_db(text: str) -> AgentSignatureDb:
    ua, exact, cidr = set(), set(), set()
    section = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("ua", "ip"):
                raise BadSection(f"line {line_no}: unknown section [{section}]")
            continue
        if section is None:
            raise BadSection(f"line {line_no}: entry outside of any section")
        if section == "ua":
            ua.add(line)
        elif "/" in line:
            cidr.add(_parse_network(line, line_no))
        else:
            try:
                exact.add(str(ipaddress.ip_address(line)))
            except ValueError:
                # not an address literal; keep verbatim so odd log values still match
                exact.add(line)
    return AgentSignatureDb(frozenset(ua), frozenset(exact), tuple(cidr))


def load_signature_db(path) -> AgentSignatureDb:
    with open(path, encoding="utf-8") as fh:
        return parse_signature_db(fh.read())


def classify(record: LogRecord, db: AgentSignatureDb) -> TrafficClass:
    if db.matches_agent(record.user_agent) or db.matches_ip(record.client_ip):
        return TrafficClass.ROBOT
    return TrafficClass.HUMAN


def split_stream(
    records: Iterable[LogRecord], db: AgentSignatureDb
) -> tuple[list[LogRecord], list[LogRecord]]:
    """Partition records into ``(humans, robots)``, keeping relative order."""
    humans, robots = [], []
    for rec in records:
        (robots if classify(rec, db) is TrafficClass.ROBOT else humans).append(rec)
    return humans, robots


def count_unidentified(records: Sequence[LogRecord]) -> int:
    """Records with neither user agent nor client ip; these default to human."""
    return sum(1 for r in records if not r.user_agent and not r.client_ip)
