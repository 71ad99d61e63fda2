from hypothesis import strategies as st

from gamelift.arena import Arena, Player


@st.composite
def arenas(draw, max_nodes=4, alphabet=(0, 1), no_choice=None, max_out=3, max_edges=None):
    """Arbitrary valid arena; ``no_choice`` names a side restricted to out-degree 1."""
    n = draw(st.integers(1, max_nodes))
    owners = draw(st.lists(st.sampled_from([Player.MAX, Player.MIN]), min_size=n, max_size=n))
    triples = []
    for v in range(n):
        deg = 1 if owners[v] is no_choice else draw(st.integers(1, max_out))
        if max_edges is not None:
            deg = max(1, min(deg, max_edges - len(triples) - (n - v - 1)))
        for _ in range(deg):
            triples.append((v, draw(st.integers(0, n - 1)), draw(st.sampled_from(list(alphabet)))))
    return Arena.build(owners, triples, alphabet)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
