import numpy as np
import pytest

import pointreg as pr
from pointreg.quadrature import QuadratureSpec, SphereGrid


@pytest.fixture(scope="session")
def gaussian_kernel():
    return pr.gaussian()


@pytest.fixture(scope="session")
def bump_kernel():
    return pr.compact_bump()


@pytest.fixture(scope="session")
def asym_kernel():
    return pr.asymmetric_bump()


@pytest.fixture(scope="session")
def even_kernels(gaussian_kernel, bump_kernel):
    return [("gaussian", gaussian_kernel), ("bump", bump_kernel)]


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture(scope="session")
def sphere_grid():
    return SphereGrid.build()


@pytest.fixture(scope="session")
def default_scales():
    # cutoff lengths 0.05 and 0.1, eps = a/100
    return [pr.TwoScale(a, a / 100.0) for a in (0.05, 0.1)]
