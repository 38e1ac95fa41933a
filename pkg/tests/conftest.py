"""Shared pytest wiring: per-criterion acceptance summary lines."""

import re
from collections import defaultdict

_CRITERION_RE = re.compile(r"test_criterion_(\d+)")

_DESCRIPTIONS = {
    1: "exhaustive matching-removed decompositions (r in 3..5, all matching sizes)",
    2: "closed-form class system: zero residual, non-negative totals, spot values",
    3: "per-edge target shaping: 100 random rational targets per r in {3,4}",
    4: "approximate-to-exact lift end to end (slab LP feeding the lift)",
    5: "two-matching complement recursion on an 18-vertex host",
    6: "family marginal laws: enumeration at toys, bound inequalities at scale",
    7: "sampler statistical validation at one million samples per host",
    8: "LP oracle agreement for all constructive successes; negative control",
    9: "blow-up projection push-down",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    by_criterion = defaultdict(lambda: {"passed": 0, "failed": 0})
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            match = _CRITERION_RE.search(nodeid)
            if not match:
                continue
            key = "passed" if status == "passed" else "failed"
            by_criterion[int(match.group(1))][key] += 1
    if not by_criterion:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(by_criterion):
        counts = by_criterion[number]
        verdict = "PASS" if counts["failed"] == 0 else "FAIL"
        detail = _DESCRIPTIONS.get(number, "")
        terminalreporter.write_line(
            f"criterion {number}: {verdict} "
            f"({counts['passed']} passed, {counts['failed']} failed) - {detail}"
        )
