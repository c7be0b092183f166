import itertools

import pytest

from hypergt import _kernels

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" :: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(params=sorted(_kernels.available_backends()))
def backend(request):
    return _kernels.available_backends()[request.param]


# Reference implementations on frozensets, kept apart from the bitmask code.

def ref_response(pools, defective):
    return tuple(int(bool(set(P) & set(defective))) for P in pools)


def ref_survivors(pools, response, edges):
    clean = set()
    for P, bit in zip(pools, response):
        if not bit:
            clean |= set(P)
    return [e for e in edges if not set(e) & clean]


def ref_p_discarding(pools, edges, p):
    for e, es in itertools.permutations(edges, 2):
        diff = set(e) - set(es)
        if len(diff) >= p and not any(set(P) & diff and not set(P) & set(es) for P in pools):
            return False
    return True


def ref_separable(pools, edges):
    seen = set()
    for e in edges:
        r = ref_response(pools, e)
        if r in seen:
            return False
        seen.add(r)
    return True
