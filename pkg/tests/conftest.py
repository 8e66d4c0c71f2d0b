import pytest

from equibase.matroids import k4_matroid


@pytest.fixture
def k4():
    """K4 graphic matroid; edge ids e0=(0,1) e1=(0,2) e2=(0,3) e3=(1,2) e4=(1,3) e5=(2,3)."""
    return k4_matroid()
