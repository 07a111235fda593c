"""Session fixtures.

Profile construction costs ~1 s per (m, n) row, so everything used by
more than one module is built once per session. The acceptance table
fixture times its own build because the runtime is part of what it
certifies.
"""

import time

import numpy as np
import pytest

from peakforge import (DEFAULT_ROWS, Dimensions, eval_u,
                       ground_state_constants, ground_state_profile)


def planar_gamma_oracle(profile, half_width=40.0, step=0.025):
    """Brute-force tensor-grid quadrature of int U^{p-1}(z) e^{z1} dz
    over a planar box, for n = 2 profiles only.

    Independent of the radial reduction: no angular kernel, no polar
    coordinates. The box edge sits where U^{p-1} e^{z1} ~ e^{-2R}, so
    truncation is far below the comparison tolerance.
    """
    assert profile.dims.n == 2
    q = profile.dims.p - 1.0
    z = np.arange(-half_width, half_width + step / 2.0, step)
    total = 0.0
    for block in np.array_split(np.arange(z.size), 16):
        z2 = z[block]
        radii = np.hypot(z[None, :], z2[:, None])
        vals = eval_u(profile, radii.ravel()).reshape(radii.shape) ** q
        total += float(np.sum(vals * np.exp(z[None, :])))
    return total * step * step


@pytest.fixture(scope="session")
def profile22():
    return ground_state_profile(Dimensions(n=2, m=2))


@pytest.fixture(scope="session")
def constants22(profile22):
    return ground_state_constants(Dimensions(n=2, m=2), profile=profile22)


@pytest.fixture(scope="session")
def profile34():
    # table row (m=3, n=4)
    return ground_state_profile(Dimensions(n=4, m=3))


@pytest.fixture(scope="session")
def constants34(profile34):
    return ground_state_constants(Dimensions(n=4, m=3), profile=profile34)


@pytest.fixture(scope="session")
def soliton13():
    # n=1, m=3 -> N=4, p=4: the closed-form sqrt(2) sech profile
    return ground_state_profile(Dimensions(n=1, m=3))


@pytest.fixture(scope="session")
def reference_run():
    """All 20 bundled rows built end-to-end: {(m, n): (profile, constants)},
    plus the wall time of the whole build."""
    start = time.perf_counter()
    rows = {}
    for m, n in DEFAULT_ROWS:
        dims = Dimensions(n=n, m=m)
        prof = ground_state_profile(dims)
        rows[(m, n)] = (prof, ground_state_constants(dims, profile=prof))
    return rows, time.perf_counter() - start
