"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import cdpp


def test_unconstrained_count_identity_kernel():
    d = cdpp.DPP(np.eye(3))
    assert d.count() == pytest.approx(8.0)
    assert d.count(backend="exact") == "8"


def test_budget_count():
    d = cdpp.DPP(np.eye(3), {"kind": "budget", "costs": [1, 1, 1], "budget": 2})
    assert d.count(backend="exact") == "7"


def test_partition_sampling_respects_quotas():
    constraint = {"kind": "partition", "parts": [[0, 1], [2, 3]], "quotas": [1, 1]}
    d = cdpp.DPP(np.eye(4), constraint)
    samples = d.sample(n=50, seed=7)
    assert len(samples) == 50
    for s in samples:
        assert len(s) == 2
        assert s[0] in (1, 2) and s[1] in (3, 4)
    # determinism
    assert samples == d.sample(n=50, seed=7)


def test_validate_psd_rejects_indefinite():
    report = cdpp.validate_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not report["ok"]
    assert report["min_eigenvalue"] == pytest.approx(-1.0)


def test_spanning_trees_triangle():
    edges = [(1, 2), (2, 3), (1, 3)]
    assert cdpp.count_spanning_trees(edges, 3) == "3"
    assert cdpp.count_spanning_trees(edges, 3, costs=[1, 2, 3], budget=4) == "2"
    tree = cdpp.sample_spanning_tree(edges, 3, costs=[1, 2, 3], budget=4, seed=1)
    assert len(tree) == 2


def test_perfect_matchings():
    c4 = [(1, 2), (2, 3), (3, 4), (4, 1)]
    assert cdpp.count_perfect_matchings(c4, 4) == "2"


def test_mixed_discriminant_projectors():
    e11 = np.diag([1.0, 0.0])
    e22 = np.diag([0.0, 1.0])
    assert cdpp.mixed_discriminant([e11, e22]) == pytest.approx(0.5, rel=1e-7)


def test_mixed_char_coeffs_identity():
    coeffs = cdpp.mixed_char_coeffs([np.eye(3)])
    assert coeffs[0] == pytest.approx(1.0)
    assert coeffs[1] == pytest.approx(-3.0, rel=1e-8)


def test_engine_error_surfaces():
    with pytest.raises(cdpp.EngineError):
        cdpp.DPP(np.array([[1.0, 2.0], [2.0, 1.0]]))
