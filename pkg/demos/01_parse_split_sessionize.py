"""
From raw log lines to sessions
==============================

Parse the bundled synthetic proxy log, split robots from humans with a
signature list, and cut each agent's requests into sessions.
"""
from pathlib import Path

from sessiongraph import botfilter, logparse, sessionizer

data = Path(__file__).resolve().parent.parent / "tests" / "data"

# the proxy layout: no host field, the client address is the last quoted field
fmt = logparse.LogFormat.from_string("proxy")
lines = logparse.read_lines(data / "fixture.log")
records, errors = logparse.parse_stream(lines, fmt)
print(f"{len(records)} records, {len(errors)} bad lines")
for n, exc in errors[:3]:
    print(f"  line {n}: {exc}")

db = botfilter.load_signature_db(data / "bots.txt")
humans, robots = botfilter.split_stream(records, db)
print(f"humans {len(humans)}  robots {len(robots)}")

# a gap of exactly 1800 s starts a new session
for label, recs in (("human", humans), ("robot", robots)):
    sessions = sessionizer.sessionize(recs, cutoff=1800)
    summary = sessionizer.summarize(recs, sessions)
    print(label, summary.to_dict())

longest = max(sessionizer.sessionize(humans), key=len)
print("longest human session:", " -> ".join(longest.resources[:8]), "...")
