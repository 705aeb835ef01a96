import pytest

from copula_forge.errors import CapacityError, DomainError
from copula_forge.verify import (
    SUITES,
    all_passed,
    designated_mesh_points,
    hat_points,
    neighbour_pair,
    run_suite,
    summarize,
)


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "mc"])
def test_exact_suites_pass_k4(suite):
    recs = run_suite(4, suite)
    assert recs and all_passed(recs)
    assert all(r["equal"] for r in recs)
    assert set(recs[0]) >= {"claim", "analytic", "oracle", "equal", "pass"}


def test_mc_suite_small():
    recs = run_suite(3, "mc", seed=1, samples=20_000)
    assert all({"delta", "se"} <= set(r) for r in recs)
    assert summarize(recs).endswith("checks passed")


def test_suite_errors():
    with pytest.raises(DomainError):
        run_suite(4, "nope")
    with pytest.raises(CapacityError):
        run_suite(9, "pmf")
    with pytest.raises(DomainError):
        run_suite(4, "mc", samples=1)


def test_point_sets():
    assert len(hat_points()) == 25
    assert designated_mesh_points(4) == [(1, 1), (2, 2), (1, 3), (3, 2), (2, 1)]
    assert neighbour_pair("antidiag", 1, 2) == ((2, 2), (1, 3))
