import pytest

from advreg.sweep import SweepConfig, run_sweep

DESK = dict(n_cells=256, k_min=4, k_max=11, fit_lo=6, fit_hi=11)


@pytest.fixture(scope="session")
def desk_sweeps():
    """Lazily computed desk-preset sweep results, shared across acceptance tests."""
    cache = {}

    def get(label, s=None):
        key = (label, s)
        if key not in cache:
            cache[key] = run_sweep(SweepConfig(label=label, s=s, **DESK))
        return cache[key]

    return get
