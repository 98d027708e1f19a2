import pytest

from loopsoup import build_kernel
from loopsoup.verify import (
    complete4_graph,
    path3_graph,
    single_vertex_graph,
    triangle_graph,
    two_point_graph,
)


@pytest.fixture(scope="session")
def two_point():
    return two_point_graph()


@pytest.fixture(scope="session")
def triangle():
    return triangle_graph()


@pytest.fixture(scope="session")
def path3():
    return path3_graph()


@pytest.fixture(scope="session")
def single_vertex():
    return single_vertex_graph()


@pytest.fixture(scope="session")
def complete4():
    return complete4_graph()


@pytest.fixture(scope="session")
def two_point_kernel(two_point):
    return build_kernel(two_point)


@pytest.fixture(scope="session")
def triangle_kernel(triangle):
    return build_kernel(triangle)


@pytest.fixture(scope="session")
def path3_kernel(path3):
    return build_kernel(path3)


@pytest.fixture(scope="session")
def single_vertex_kernel(single_vertex):
    return build_kernel(single_vertex)
