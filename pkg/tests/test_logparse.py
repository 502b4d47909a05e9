from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from sessiongraph.errors import BadStatus, BadTimestamp, MalformedLine
from sessiongraph.logparse import (LogFormat, LogRecord, format_record, parse_line, parse_stream,
                                   read_lines, resource_key)

from conftest import SAMPLE_LINE

PROXY = LogFormat.from_string("proxy")
COMBINED = LogFormat.from_string("combined")
COMBINED_IP = LogFormat.from_string("h i u t r s b R U A")


def test_sample_proxy_line():
    rec = parse_line(SAMPLE_LINE, PROXY)
    expected = int(datetime(2016, 4, 2, 4, 0, 9, tzinfo=timezone.utc).timestamp())
    assert rec.timestamp == expected == 1459569609
    assert (rec.method, rec.path, rec.protocol) == ("GET", "/path/to/some/resource", "HTTP/1.1")
    assert rec.status == 200
    assert rec.size == 5972
    assert rec.referer == "http://www.example.com/refererpage.html"
    assert rec.user_agent.startswith("Mozilla/5.0 (iPhone;")
    assert rec.client_ip == "11.111.111.111"


def test_dash_size_is_absent():
    rec = parse_line(SAMPLE_LINE.replace("5972", "-"), PROXY)
    assert rec.size is None
    assert rec.status == 200 and rec.client_ip == "11.111.111.111"


@pytest.mark.parametrize("line", ["a b c", "", "- - [02/Apr/2016:00:00:09 -0400]"])
def test_short_lines_are_malformed(line):
    with pytest.raises(MalformedLine):
        parse_line(line, PROXY)


def test_bad_timestamp_and_status():
    with pytest.raises(BadTimestamp):
        parse_line(SAMPLE_LINE.replace("02/Apr", "45/Apr"), PROXY)
    with pytest.raises(BadStatus):
        parse_line(SAMPLE_LINE.replace(" 200 ", " 700 "), PROXY)
    with pytest.raises(BadStatus):
        parse_line(SAMPLE_LINE.replace(" 200 ", " OK "), PROXY)


def test_combined_format_uses_host_as_ip():
    line = ('10.0.0.7 - frank [10/Oct/2000:13:55:36 -0700] "GET /apache_pb.gif HTTP/1.0" 200 2326 '
            '"http://www.example.com/start.html" "Mozilla/4.08 [en] (Win98; I ;Nav)"')
    rec = parse_line(line, COMBINED)
    assert rec.client_ip == "10.0.0.7"
    assert rec.user_agent == "Mozilla/4.08 [en] (Win98; I ;Nav)"
    # the optional trailing ip field may be missing under the extended layout
    assert parse_line(line, COMBINED_IP) == rec


def test_escaped_quotes_are_unescaped():
    line = SAMPLE_LINE.replace('"Mozilla/5.0 (iPhone; CPU iPhone OS 7_0 like Mac OS X)"',
                              r'"weird \"quoted\" agent"')
    assert parse_line(line, PROXY).user_agent == 'weird "quoted" agent'


def test_dash_referer_and_agent_absent():
    line = '- - [02/Apr/2016:00:00:09 -0400] "GET / HTTP/1.1" 304 0 "-" "-" "1.2.3.4"'
    rec = parse_line(line, PROXY)
    assert rec.referer is None and rec.user_agent is None and rec.size == 0


def test_format_validation():
    with pytest.raises(ValueError):
        LogFormat.from_string("h i u r s b")  # no time token
    with pytest.raises(ValueError):
        LogFormat.from_string("h t t r s")
    with pytest.raises(ValueError):
        LogFormat.from_string("A h t r s")


def test_parse_stream_collects_errors():
    good = SAMPLE_LINE
    records, errors = parse_stream([good, good, good], PROXY)
    assert len(records) == 3 and errors == []
    records, errors = parse_stream([good, "garbage", good], PROXY)
    assert len(records) == 2
    assert [n for n, _ in errors] == [2]
    assert isinstance(errors[0][1], MalformedLine)
    assert [r.source_line for r in records] == [1, 3]
    assert parse_stream([], PROXY) == ([], [])


def test_read_lines_lossy_utf8(tmp_path):
    p = tmp_path / "bad.log"
    p.write_bytes(SAMPLE_LINE.encode() + b"\n" + b"\xff\xfe junk\n")
    lines = read_lines(p)
    assert len(lines) == 2 and "�" in lines[1]
    records, errors = parse_stream(lines, PROXY)
    assert len(records) == 1 and len(errors) == 1


@pytest.mark.parametrize("path,policy,expected", [
    ("/a/b?x=1", "verbatim", "/a/b?x=1"),
    ("/a/b?x=1", "strip-query", "/a/b"),
    ("/a/b", "strip-query", "/a/b"),
    ("/a?b?c", "strip-query", "/a"),
])
def test_resource_key(path, policy, expected):
    rec = LogRecord(0, "GET", path, "HTTP/1.1", 200)
    assert resource_key(rec, policy) == expected


_text = st.text(st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp")), min_size=1, max_size=30)
_optional_text = st.one_of(st.none(), _text.filter(lambda s: s != "-"))
_token = st.text(st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters='"\\'),
                 min_size=1, max_size=20)

records = st.builds(
    LogRecord,
    timestamp=st.integers(0, 4_000_000_000),
    method=st.sampled_from(["GET", "POST", "HEAD"]),
    path=_token.map(lambda s: "/" + s),
    protocol=st.sampled_from(["HTTP/1.0", "HTTP/1.1", ""]),
    status=st.integers(100, 599),
    size=st.one_of(st.none(), st.integers(0, 10**9)),
    referer=_optional_text,
    user_agent=_optional_text,
    client_ip=st.one_of(st.none(), _token.filter(lambda s: s != "-")),
    source_line=st.just(7),
)


@given(records, st.sampled_from([PROXY, COMBINED_IP]))
def test_round_trip(record, fmt):
    assert parse_line(format_record(record, fmt), fmt, 7) == record


@given(st.lists(st.one_of(records.map(lambda r: format_record(r, PROXY)), st.text(max_size=40)), max_size=20))
def test_stream_partitions_lines(lines):
    lines = [l.replace("\n", " ").replace("\r", " ") for l in lines]
    recs, errs = parse_stream(lines, PROXY)
    assert len(recs) + len(errs) == len(lines)
    numbers = sorted([r.source_line for r in recs] + [n for n, _ in errs])
    assert numbers == list(range(1, len(lines) + 1))
    assert parse_stream(lines, PROXY)[0] == recs
