import numpy as np
import pytest

from ghm.generators import fixture


@pytest.fixture(scope="session")
def p5():
    return fixture("P5")


@pytest.fixture(scope="session")
def star4():
    return fixture("STAR4")


@pytest.fixture(scope="session")
def c4():
    return fixture("C4")


@pytest.fixture(scope="session")
def k4():
    return fixture("K4")


@pytest.fixture(scope="session")
def sun3():
    return fixture("SUN3")


@pytest.fixture(scope="session")
def king33():
    return fixture("KING33")


@pytest.fixture(scope="session")
def split_h2():
    return fixture("SPLIT-H2")


def dict_bfs(g, sources):
    """Reference BFS independent of both package engines."""
    from collections import deque

    dist = {s: 0 for s in sources}
    dq = deque(sources)
    while dq:
        v = dq.popleft()
        for u in g.neighbors(v).tolist():
            if u not in dist:
                dist[u] = dist[v] + 1
                dq.append(u)
    return np.array([dist.get(v, -1) for v in range(g.n)])
