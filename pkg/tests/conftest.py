import numpy as np
import pytest

from specdr import _kernels_py, kernels

KERNEL_MODULES = [_kernels_py] + ([kernels.compiled] if kernels.compiled is not None else [])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.NAME)
def kernel_module(request):
    return request.param


def rel_err(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b)))


def random_orthonormal(rng, n, k=None):
    Q, _ = np.linalg.qr(rng.normal(size=(n, k or n)))
    return Q


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
