"""Regenerate fixture.log, bots.txt and fixture.expected.json.

The log is written from an explicit session plan, and the expected counts
are tallied from that same plan (components via networkx), so the oracle
never touches the package under test. Run from anywhere:

    python tests/data/make_fixture.py
"""
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

import networkx as nx

HERE = Path(__file__).parent
CUTOFF = 1800
TOTAL_LINES = 1000
LOCAL = timezone(timedelta(hours=-4))
START = datetime(2016, 4, 1, 0, 0, 0, tzinfo=LOCAL)

HUMAN_PAGES = ["/", "/about", "/admissions", "/news", "/calendar", "/calendar?month=4",
               "/calendar?month=5", "/css/site.css", "/js/app.js", "/img/logo.png",
               "/library", "/library/hours", "/athletics", "/people/~smith", "/people/~jones",
               "/search?q=parking", "/search?q=tuition", "/apply", "/apply/status", "/contact"]
ROBOT_PAGES = HUMAN_PAGES + ["/robots.txt", "/sitemap.xml", "/old/page1.html", "/old/page2.html",
                             "/people/~smith/cv.pdf", "/feeds/news.rss", "/wp-login.php",
                             "/archive/2009", "/archive/2010", "/archive/2011"]

BROWSER = "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/50.0"
IPHONE = "Mozilla/5.0 (iPhone; CPU iPhone OS 7_0 like Mac OS X)"
FIREFOX = "Mozilla/5.0 (X11; Linux x86_64; rv:45.0) Gecko/20100101 Firefox/45.0"

# (user agent or None, ip, traffic class)
AGENTS = [
    (BROWSER, "11.111.111.101", "human"),
    (BROWSER, "11.111.111.102", "human"),
    (IPHONE, "11.111.111.103", "human"),
    (IPHONE, "11.111.111.104", "human"),
    (FIREFOX, "11.111.111.104", "human"),   # shares an ip with the agent above
    (FIREFOX, "11.111.111.105", "human"),
    (None, "11.111.111.106", "human"),      # no user agent at all
    (BROWSER, "11.111.111.107", "human"),
    (IPHONE, "11.111.111.108", "human"),
    (FIREFOX, "11.111.111.109", "human"),
    ("Mozilla/5.0 (compatible; Googlebot/2.1; +http://www.google.com/bot.html)", "66.249.66.1", "robot"),
    ("Mozilla/5.0 (compatible; Googlebot/2.1; +http://www.google.com/bot.html)", "66.249.66.2", "robot"),
    ("Mozilla/5.0 (compatible; bingbot/2.0; +http://www.bing.com/bingbot.htm)", "157.55.39.7", "robot"),
    ("Mozilla/5.0 (compatible; AhrefsBot/5.1)", "151.80.31.9", "robot"),
    (BROWSER, "192.0.2.44", "robot"),        # caught by CIDR block only
    (FIREFOX, "203.0.113.9", "robot"),       # caught by exact ip only
]

BOTS_DB = """\
# test signature list
[ua]
googlebot
BingBot
ahrefsbot
[ip]
192.0.2.0/24   # scanner range
203.0.113.9
"""

BAD_LINES = [
    "this is not a log line",
    "",
    "- - [01/Apr/2016:00:00:01 -0400]",
    '- - [32/Apr/2016:00:00:01 -0400] "GET / HTTP/1.1" 200 10 "-" "x" "1.1.1.1"',
    '- - [01/Apr/2016:00:00:01 -0400] "GET / HTTP/1.1" 999 10 "-" "x" "1.1.1.1"',
    '- - [01/Apr/2016:00:00:01 -0400] "GET / HTTP/1.1" abc 10 "-" "x" "1.1.1.1"',
    '- - [01/Apr/2016:00:00:01 -0400] "-" 400 0 "-" "x" "1.1.1.1"',
    '- - [01/Apr/2016:00:00:01 -0400] "GET / HTTP/1.1" 200 lots "-" "x" "1.1.1.1"',
]


def plan_sessions(rng, n_requests):
    """Assign requests to agents and sessions; returns per-agent session lists."""
    plan = {i: [] for i in range(len(AGENTS))}
    clock = {i: rng.randint(0, 3000) for i in range(len(AGENTS))}
    remaining = n_requests
    while remaining:
        i = rng.randrange(len(AGENTS))
        pages = ROBOT_PAGES if AGENTS[i][2] == "robot" else HUMAN_PAGES
        length = min(remaining, rng.choice([1, 1, 2, 3, 4, 5, 6, 8, 10, 14]))
        if plan[i]:
            # new session: gap of at least the cutoff, sometimes exactly it
            clock[i] += CUTOFF if rng.random() < 0.2 else rng.randint(CUTOFF, CUTOFF + 20000)
        session = []
        for k in range(length):
            if k:
                # inside a session: gap strictly below the cutoff, including 0 and cutoff - 1
                clock[i] += rng.choice([0, 1, 5, 30, 120, 600, CUTOFF - 1])
            if session and rng.random() < 0.1:
                page = session[-1][0]  # immediate repeat -> self transition
            else:
                page = rng.choice(pages)
            session.append((page, clock[i]))
        plan[i].append(session)
        remaining -= length
    return plan


def expected_for(agent_ids, plan):
    sessions = [s for i in agent_ids for s in plan[i]]
    requests = [r for s in sessions for r in s]
    g = nx.DiGraph()
    loops = 0
    for s in sessions:
        g.add_nodes_from(p for p, _ in s)
        for (a, _), (b, _) in zip(s, s[1:]):
            if a == b:
                loops += 1
            else:
                g.add_edge(a, b)
    wccs = [len(c) for c in nx.weakly_connected_components(g)]
    sccs = [len(c) for c in nx.strongly_connected_components(g)]
    return {
        "requests": len(requests),
        "sessions": len(sessions),
        "agents": len({AGENTS[i][:2] for i in agent_ids if plan[i]}),
        "ips": len({AGENTS[i][1] for i in agent_ids if plan[i]}),
        "resources": g.number_of_nodes(),
        "nodes": g.number_of_nodes(),
        "edges": g.number_of_edges(),
        "self_loops": loops,
        "wcc_count": len(wccs),
        "scc_count": len(sccs),
        "largest_wcc": max(wccs, default=0),
        "largest_scc": max(sccs, default=0),
        "start_time": int(START.timestamp()) + min((t for _, t in requests), default=0),
        "end_time": int(START.timestamp()) + max((t for _, t in requests), default=0),
    }


def quote(value):
    return '"-"' if value is None else '"' + value.replace('"', '\\"') + '"'


def main():
    rng = random.Random(20160401)
    plan = plan_sessions(rng, TOTAL_LINES - len(BAD_LINES))

    events = []
    for i, sessions in plan.items():
        ua, ip, _ = AGENTS[i]
        for s in sessions:
            for page, t in s:
                events.append((t, len(events), page, ua, ip))
    events.sort(key=lambda e: (e[0], e[1]))

    lines = []
    for t, _, page, ua, ip in events:
        when = (START + timedelta(seconds=t)).strftime("%d/%b/%Y:%H:%M:%S %z")
        size = "-" if rng.random() < 0.05 else str(rng.randint(200, 90000))
        referer = "-" if rng.random() < 0.5 else "http://www.wright.example" + rng.choice(HUMAN_PAGES)
        status = rng.choice([200, 200, 200, 200, 304, 404])
        lines.append(f'- - [{when}] "GET {page} HTTP/1.1" {status} {size} {quote(referer)} {quote(ua)} "{ip}"')
    for bad in BAD_LINES:
        lines.insert(rng.randrange(len(lines) + 1), bad)
    assert len(lines) == TOTAL_LINES

    humans = [i for i, a in enumerate(AGENTS) if a[2] == "human"]
    robots = [i for i, a in enumerate(AGENTS) if a[2] == "robot"]
    expected = {
        "cutoff": CUTOFF,
        "format": "proxy",
        "lines": TOTAL_LINES,
        "records": TOTAL_LINES - len(BAD_LINES),
        "errors": len(BAD_LINES),
        "human": expected_for(humans, plan),
        "robot": expected_for(robots, plan),
    }
    (HERE / "fixture.log").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (HERE / "bots.txt").write_text(BOTS_DB, encoding="utf-8")
    (HERE / "fixture.expected.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
