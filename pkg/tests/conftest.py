import math

import numpy as np
import pytest

EULER_GAMMA = 0.57721566490153286061

_ACCEPTANCE_LINES = []


def record_acceptance(name, passed, detail):
    line = f"{name} {'PASS' if passed else 'FAIL'}: {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def regime_grid(size=200, seed=20240607):
    """Deterministic (n, alpha, w) triples with n in [1e2, 1e8], alpha in [4, n^0.9]."""
    rng = np.random.default_rng(seed)
    out = []
    ws = (0.9, 1.0, 1.1)
    while len(out) < size:
        n = int(round(10 ** rng.uniform(2, 8)))
        hi = n**0.9
        alpha = int(round(math.exp(rng.uniform(math.log(4), math.log(hi)))))
        alpha = min(max(alpha, 4), int(hi))
        w = ws[len(out) % 3]
        if n / (w * alpha) > 1:
            out.append((n, alpha, w))
    return out


@pytest.fixture(scope="session")
def grid():
    return regime_grid()
