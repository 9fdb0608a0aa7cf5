"""The invariant self-check battery must pass, and must catch planted bugs."""

import numpy as np
import pytest

from entcap import BipartiteOperator, partial_transpose, run_invariant_groups
from entcap.verify import GROUP_NAMES, run_invariant_groups as run_groups


@pytest.fixture(scope="module")
def full_run():
    return run_invariant_groups(seed=0)


def test_all_groups_pass(full_run):
    assert [r.name for r in full_run] == list(GROUP_NAMES)
    for r in full_run:
        assert r.passed, f"{r.name}: {r.failures[:3]}"
        assert r.failures == ()
        assert r.checks > 0
        assert r.worst >= 0.0


def test_results_serialize(full_run):
    d = full_run[0].to_dict()
    assert set(d) == {"name", "passed", "checks", "failures", "worst_deviation", "wall_time"}
    assert d["passed"] is True
    assert isinstance(d["failures"], list)


def test_subset_selection_keeps_order():
    results = run_groups(seed=0, groups=["reductions", "gram-identity"])
    assert [r.name for r in results] == ["reductions", "gram-identity"]
    assert all(r.passed for r in results)


def test_unknown_group_rejected():
    with pytest.raises(ValueError):
        run_groups(groups=["no-such-battery"])


def test_planted_partial_transpose_bug_is_caught():
    def broken(op, party="B"):
        good = partial_transpose(op, party)
        return BipartiteOperator(-good.matrix, good.layout)

    results = run_groups(seed=0, groups=["partial-transpose"], pt_fn=broken)
    assert len(results) == 1
    assert not results[0].passed
    assert len(results[0].failures) > 0
    assert results[0].worst > 0.1


def test_seed_changes_samples_not_verdict():
    a = run_groups(seed=1, groups=["partial-transpose"])
    b = run_groups(seed=2, groups=["partial-transpose"])
    assert a[0].passed and b[0].passed
    assert a[0].worst != b[0].worst
    assert np.isfinite(a[0].worst)
