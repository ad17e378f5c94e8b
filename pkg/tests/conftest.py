import pytest

from skeintorus.surface import FIXTURES, fixture

SMALL = ("triangle", "square", "annulus", "punctured_disc", "holed_torus")

# acceptance criterion number -> list of (part, passed, detail)
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for n in sorted(CRITERIA):
        parts = CRITERIA[n]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name}: {'ok' if p else 'FAIL'} ({d})" for name, p, d in parts)
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(params=FIXTURES)
def surface(request):
    return fixture(request.param)


def endpoint_oracle(t):
    """
    Edge endpoints as library vertex ids, from an explicit gluing graph.

    OUTPUT: dict ``edge -> (tail vertex, head vertex)``.
    """
    import networkx as nx
    G = nx.Graph()
    for f, (_, sides) in enumerate(t.faces):
        for j, (e, sg) in enumerate(sides):
            start, end = ("v", f, j), ("v", f, (j + 1) % 3)
            tail, head = (start, end) if sg > 0 else (end, start)
            G.add_edge(tail, ("tail", e))
            G.add_edge(head, ("head", e))
    label = {}
    for cc in nx.connected_components(G):
        # the start of slot j is the vertex of corner j - 1
        f, j = next((n[1], n[2]) for n in cc if n[0] == "v")
        v = t.corner(f, (j - 1) % 3).vertex
        for n in cc:
            label[n] = v
    return {e: (label[("tail", e)], label[("head", e)]) for e in t.edges}
