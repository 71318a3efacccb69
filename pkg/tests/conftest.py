import pytest

from rtplab.config import make_scenario_spec
from rtplab.scenarios import run_scenario


def _run(tmp_path_factory, name, **kwargs):
    out = tmp_path_factory.mktemp(name)
    spec = make_scenario_spec(out_dir=str(out), **kwargs)
    return run_scenario(spec, quiet=True)


@pytest.fixture(scope="session")
def scenario_a(tmp_path_factory):
    """Repetitive sinusoid task, narrow receptive fields."""
    return _run(tmp_path_factory, "scenario_a", scenario="A", column="a")


@pytest.fixture(scope="session")
def scenario_a_wide(tmp_path_factory):
    """Repetitive sinusoid task with the wide receptive fields."""
    return _run(tmp_path_factory, "scenario_a_wide", scenario="A", column="b")


@pytest.fixture(scope="session")
def scenario_b(tmp_path_factory):
    """Nonrepetitive random-spline task."""
    return _run(tmp_path_factory, "scenario_b", scenario="B", column="a")


@pytest.fixture(scope="session")
def scenario_c(tmp_path_factory):
    """Sinusoid task with the half-length perturbation at 50 s."""
    return _run(tmp_path_factory, "scenario_c", scenario="C", column="a")


@pytest.fixture(scope="session")
def scenario_d(tmp_path_factory):
    """Long random-spline learning with checkpoint evaluation."""
    return _run(tmp_path_factory, "scenario_d", scenario="D", column="a")
