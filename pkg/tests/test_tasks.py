"""
Tests des tâches Celery de vérification (mode eager, pas de broker requis).

Usage:
    pytest tests/test_tasks.py -v -s

Pour viser un vrai worker:
    ./run.sh worker
    AFFVIR_EAGER=false pytest tests/test_tasks.py -v -s
"""
import json

import pytest

from app.celery_app import celery
from app.errors import InvalidProblem, WindowError
from app.tasks import (biderivation_row, decomposition, degree_zero_cohomology, degree_zero_homs, dense_derivations,
                       derivation_row, gamma_gap, get_algebra, nonzero_degree_row, postlie_row, quotient_endomorphisms,
                       quotient_row, semisimple_base)

TIMEOUT = 300


class TestCeleryConfig:
    """Configuration de l'application Celery."""

    def test_eager_in_tests(self):
        assert celery.conf.task_always_eager
        assert celery.conf.task_eager_propagates

    def test_json_only(self):
        assert celery.conf.task_serializer == "json"
        assert "json" in celery.conf.accept_content

    def test_tasks_registered(self):
        names = set(celery.tasks.keys())
        for task in (derivation_row, nonzero_degree_row, biderivation_row, postlie_row):
            assert task.name in names


class TestAlgebraCache:
    def test_same_instance(self):
        assert get_algebra("a1", False) is get_algebra(" A1 ", False)

    def test_matrix_spec(self):
        L = get_algebra([[2, -1], [-1, 2]], False)
        assert L.g.dim == 8
        assert get_algebra(((2, -1), (-1, 2)), False) is L


class TestDerivationTasks:
    def test_derivation_row(self):
        row = derivation_row.delay("A1", "full", "full", 4, 1).get(timeout=TIMEOUT)
        json.dumps(row)
        assert row["interior_equal"] and row["h1"] == 0
        print(f"\n✓ Der n=1: {row['dim_der_interior']} = {row['dim_inner_interior']}")

    def test_nonzero_degree_row(self):
        rows = [nonzero_degree_row.delay("A1", 4, n).get(timeout=TIMEOUT) for n in (0, 1)]
        assert [(r["n"], r["asserted"]) for r in rows] == [(0, False), (1, True)]
        assert rows[1]["interior_equal"]

    def test_lemmas(self):
        assert degree_zero_cohomology.delay("A1", 2).get(timeout=TIMEOUT) == {"m": 2, "ok": True}
        assert degree_zero_homs.delay("A1", 1, -1).get(timeout=TIMEOUT) == {"m": 1, "n": -1, "dim": 0}

    def test_gamma_gap(self):
        gap = gamma_gap.delay("A1", 4).get(timeout=TIMEOUT)
        assert gap["ok"]
        assert gap["N"] == 4

    def test_quotient_endomorphisms(self):
        assert quotient_endomorphisms.delay("A1", 4).get(timeout=TIMEOUT) == {"N": 4, "dim": 1}

    def test_dense_derivations(self):
        assert dense_derivations.delay("A1").get(timeout=TIMEOUT) == {"dim_graded": 3, "dim_dense": 3, "equal": True}

    def test_errors_propagate(self):
        with pytest.raises(WindowError):
            derivation_row.delay("A1", "full", "full", 2, 2).get(timeout=TIMEOUT)
        with pytest.raises(InvalidProblem):
            derivation_row.delay("A1", "full", "vir", 4, 0).get(timeout=TIMEOUT)


class TestBiderivationTasks:
    def test_skew_row(self):
        row = biderivation_row.delay("A1", "full", 4, 0, "skew").get(timeout=TIMEOUT)
        assert row["dim_interior"] == 1
        assert row["contains_F1"] and row["factorises"]

    def test_symmetric_row(self):
        row = biderivation_row.delay("A1", "full", 4, 0, "sym").get(timeout=TIMEOUT)
        assert row["dim_interior"] == 0
        assert "factorises" not in row

    def test_quotient_row(self):
        row = quotient_row.delay("A1", 4, 0).get(timeout=TIMEOUT)
        assert row["injective_on_interior"] and row["image_in_quotient_space"]

    def test_decomposition(self):
        assert decomposition.delay("A1", "vir", 4, 0).get(timeout=TIMEOUT)["ok"]

    def test_semisimple_base(self):
        result = semisimple_base.delay("A2").get(timeout=TIMEOUT)
        assert result["ok"]
        assert set(result["dims"]) == {"mixed_adjoint", "symmetric_adjoint", "symmetric_trivial"}


class TestPostLieTask:
    def test_postlie_row(self):
        row = postlie_row.delay("A1", "full", 4, 0).get(timeout=TIMEOUT)
        assert row == {"selector": "full", "N": 4, "n": 0, "sym_bider_dim_interior": 0, "postlie_trivial": True}
