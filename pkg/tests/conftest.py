import numpy as np
import pytest

from egoimpute.generators import ModelSpec, gen_sbm, make_rng, sample_adjacency


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    a = np.triu((rng.random((n, n)) < p).astype(float), 1)
    return a + a.T


def low_rank_psd(n, k, seed, scale=1.0):
    """Random symmetric PSD matrix of exact rank k with entries in [0, scale]."""
    rng = np.random.default_rng(seed)
    z = rng.random((n, k))
    m = z @ z.T
    return scale * m / m.max()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def sbm_network():
    spec = ModelSpec(kind="sbm", n_nodes=200, k=3, target_degree=20.0)
    p = gen_sbm(spec, make_rng(7))
    a = sample_adjacency(p, 8)
    return p, a


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
