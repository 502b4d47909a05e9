"""Access-log parsing.

A log layout is described by a whitespace-separated token string, one token
per field::

    h  remote host          i  identd            u  authuser
    t  [bracketed time]     r  "request line"    s  status
    b  size or "-"          R  "referer"         U  "user agent"
    A  "client ip"          (optional trailing field)

``"h i u t r s b R U"`` is the Apache combined format. Some servers sit behind
a proxy and log ``- -`` up front with the real client address appended as a
final quoted field; ``"i u t r s b R U A"`` describes that layout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Optional

from .errors import BadStatus, BadTimestamp, MalformedLine, ParseError

TIME_FORMAT = "%d/%b/%Y:%H:%M:%S %z"

PRESETS = {
    "common": "h i u t r s b",
    "combined": "h i u t r s b R U",
    "combined-ip": "h i u t r s b R U A",
    "proxy": "i u t r s b R U A",
}
DEFAULT_FORMAT = "combined-ip"

_BARE = r"(\S+)"
_QUOTED = r'"((?:[^"\\]|\\.)*)"'
_TOKEN_PATTERNS = {
    "h": _BARE,
    "i": _BARE,
    "u": _BARE,
    "t": r"\[([^\]]*)\]",
    "r": _QUOTED,
    "s": _BARE,
    "b": _BARE,
    "R": _QUOTED,
    "U": _QUOTED,
    "A": _QUOTED,
}
_UNESCAPE = re.compile(r"\\([\\\"])")


@dataclass(frozen=True)
class LogFormat:
    tokens: tuple[str, ...]

    def __post_init__(self):
        unknown = [t for t in self.tokens if t not in _TOKEN_PATTERNS]
        if unknown:
            raise ValueError(f"unknown format tokens: {unknown}")
        for required in "trs":
            if self.tokens.count(required) != 1:
                raise ValueError(f"format needs exactly one {required!r} token")
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("format tokens must not repeat")
        if "A" in self.tokens and self.tokens[-1] != "A":
            raise ValueError("the client-ip token 'A' must come last")
        object.__setattr__(self, "_regex", self._compile())

    @classmethod
    def from_string(cls, spec: str) -> "LogFormat":
        """Build a format from a token string or a preset name."""
        spec = PRESETS.get(spec.strip(), spec)
        return cls(tuple(spec.split()))

    def __str__(self):
        return " ".join(self.tokens)

    def _compile(self) -> re.Pattern:
        parts = [_TOKEN_PATTERNS[t] for t in self.tokens if t != "A"]
        pattern = r"^\s*" + r"\s+".join(parts)
        if "A" in self.tokens:
            # trailing client ip may be absent even when the layout allows it
            pattern += r"(?:\s+" + _QUOTED + r")?"
        return re.compile(pattern + r"\s*$")

    def match(self, line: str) -> Optional[dict[str, str]]:
        m = self._regex.match(line)
        if m is None:
            return None
        return {tok: val for tok, val in zip(self.tokens, m.groups())}


@dataclass(frozen=True)
class LogRecord:
    timestamp: int
    method: str
    path: str
    protocol: str
    status: int
    size: Optional[int] = None
    referer: Optional[str] = None
    user_agent: Optional[str] = None
    client_ip: Optional[str] = None
    source_line: int = 0

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "method": self.method,
            "path": self.path,
            "protocol": self.protocol,
            "status": self.status,
            "size": self.size,
            "referer": self.referer,
            "user_agent": self.user_agent,
            "client_ip": self.client_ip,
            "source_line": self.source_line,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogRecord":
        return cls(**d)


def _unquote(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    value = _UNESCAPE.sub(r"\1", value)
    return None if value == "-" else value


def _quote(value: Optional[str]) -> str:
    if value is None:
        return '"-"'
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_timestamp(text: str) -> int:
    try:
        dt = datetime.strptime(text, TIME_FORMAT)
    except ValueError as exc:
        raise BadTimestamp(f"bad timestamp {text!r}") from exc
    return int(dt.timestamp())


def format_timestamp(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime(TIME_FORMAT)


def parse_line(line: str, fmt: LogFormat, line_number: int = 0) -> LogRecord:
    """Parse one access-log line.

    Raises MalformedLine when the layout does not match, BadTimestamp when the
    bracketed time cannot be read and BadStatus for a status outside 100-599.
    """
    fields = fmt.match(line.rstrip("\r\n"))
    if fields is None:
        raise MalformedLine(f"line does not match format {fmt}")

    timestamp = parse_timestamp(fields["t"])

    request = _UNESCAPE.sub(r"\1", fields["r"]).split(" ")
    if len(request) == 3:
        method, path, protocol = request
    elif len(request) == 2:
        (method, path), protocol = request, ""
    else:
        raise MalformedLine(f"unreadable request line {fields['r']!r}")
    if not method or not path:
        raise MalformedLine(f"unreadable request line {fields['r']!r}")

    try:
        status = int(fields["s"])
    except ValueError as exc:
        raise BadStatus(f"non-integer status {fields['s']!r}") from exc
    if not 100 <= status <= 599:
        raise BadStatus(f"status {status} out of range")

    size = None
    raw_size = fields.get("b", "-")
    if raw_size != "-":
        if not raw_size.isdigit():
            raise MalformedLine(f"bad size field {raw_size!r}")
        size = int(raw_size)

    client_ip = _unquote(fields.get("A"))
    if client_ip is None and fields.get("h", "-") != "-":
        client_ip = fields["h"]

    return LogRecord(
        timestamp=timestamp,
        method=method,
        path=path,
        protocol=protocol,
        status=status,
        size=size,
        referer=_unquote(fields.get("R")),
        user_agent=_unquote(fields.get("U")),
        client_ip=client_ip,
        source_line=line_number,
    )


def format_record(record: LogRecord, fmt: LogFormat) -> str:
    """Render a record back into ``fmt``; the inverse of parse_line."""
    request = " ".join(p for p in (record.method, record.path, record.protocol) if p)
    host = "-"
    if "A" not in fmt.tokens and record.client_ip is not None:
        host = record.client_ip
    out = []
    for tok in fmt.tokens:
        if tok == "h":
            out.append(host)
        elif tok in "iu":
            out.append("-")
        elif tok == "t":
            out.append(f"[{format_timestamp(record.timestamp)}]")
        elif tok == "r":
            out.append(_quote(request))
        elif tok == "s":
            out.append(str(record.status))
        elif tok == "b":
            out.append("-" if record.size is None else str(record.size))
        elif tok == "R":
            out.append(_quote(record.referer))
        elif tok == "U":
            out.append(_quote(record.user_agent))
        elif tok == "A":
            out.append(_quote(record.client_ip))
    return " ".join(out)


def parse_stream(
    lines: Iterable[str], fmt: LogFormat, first_line: int = 1
) -> tuple[list[LogRecord], list[tuple[int, ParseError]]]:
    """Parse many lines, collecting failures instead of raising.

    Every input line ends up either in ``records`` or in ``errors`` (as a
    ``(line_number, exception)`` pair); both keep input order.
    """
    records, errors = [], []
    for number, line in enumerate(lines, start=first_line):
        try:
            records.append(parse_line(line, fmt, number))
        except ParseError as exc:
            errors.append((number, exc))
    return records, errors


def read_lines(path) -> list[str]:
    """Read a log file as text, replacing undecodable bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    return data.decode("utf-8", errors="replace").splitlines()


def resource_key(record: LogRecord, normalization: str = "verbatim") -> str:
    if normalization == "verbatim":
        return record.path
    if normalization == "strip-query":
        return record.path.split("?", 1)[0]
    raise ValueError(f"unknown path normalization {normalization!r}")
