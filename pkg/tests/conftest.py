import os

import numpy as np
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_probs(rng: np.random.Generator, shape, zero_frac: float = 0.2) -> np.ndarray:
    """Random table on ``shape`` with some exact zeros, normalized to 1."""
    p = rng.exponential(size=shape)
    p[rng.random(shape) < zero_frac] = 0.0
    if p.sum() == 0:
        p.flat[0] = 1.0
    return p / p.sum()


@st.composite
def small_dists(draw, max_vars: int = 4, max_cells: int = 256):
    """(names, probs) with at most ``max_cells`` joint cells."""
    from cicsec.infotheory import FiniteDist

    k = draw(st.integers(1, max_vars))
    sizes = []
    for _ in range(k):
        room = max_cells // max(1, int(np.prod(sizes)) if sizes else 1)
        sizes.append(draw(st.integers(1, min(4, room))))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    names = tuple(f"V{i}" for i in range(k))
    return FiniteDist(names, random_probs(rng, tuple(sizes)))


# one status line per acceptance criterion, shown at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
