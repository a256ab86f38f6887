import numpy as np
import pytest

from fratio import FiniteAbelianGroup, Signal, make_dft, make_gabor_block, make_haar, make_wht


def complex_gaussian(group: FiniteAbelianGroup, seed: int) -> Signal:
    rng = np.random.default_rng(seed)
    return Signal(group, rng.standard_normal(group.size) + 1j * rng.standard_normal(group.size))


def small_systems():
    return [
        make_dft(FiniteAbelianGroup((6,))),
        make_dft(FiniteAbelianGroup((2, 3))),
        make_wht(3),
        make_gabor_block(4, 3),
        make_haar(16),
    ]


@pytest.fixture(params=small_systems(), ids=lambda s: s.system_id)
def small_system(request):
    return request.param
