import numpy as np
import pytest

from modcen import Graph, Partition
from modcen.datasets import load_toy_network


def random_graph(rng, n, p=0.4):
    """Seeded G(n,p) with dense ids; may be disconnected."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = rng.random(len(pairs)) < p
    edges = [pairs[i] for i in np.flatnonzero(mask)]
    return Graph.from_edges(edges, n_nodes=n)


def random_partition(rng, n, m):
    labels = rng.integers(0, m, size=n)
    return Partition.from_labels(labels)


@pytest.fixture(scope="session")
def toy():
    return load_toy_network()


@pytest.fixture
def rng():
    return np.random.default_rng(42)


ACCEPTANCE_RESULTS: list[tuple[str, bool | None, str]] = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one verdict line per acceptance criterion, then enforce it."""
    def record(criterion, ok, detail=""):
        ok = None if ok is None else bool(ok)
        ACCEPTANCE_RESULTS.append((criterion, ok, detail))
        if ok is False:
            pytest.fail(f"{criterion}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        line = f"{criterion}: {status}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
