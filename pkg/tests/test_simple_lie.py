"""
Tests de g: racines, base de Chevalley, forme de Killing.

L'oracle indépendant est sympy: la forme de Killing est recalculée comme
trace de produits de matrices adjointes.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from app.algebra.simple_lie import (build_simple_lie, cartan_matrix, chevalley_structure_constants,
                                    dual_coxeter_number, killing_form, load_cartan_file, normalized_form,
                                    parse_cartan_text, roots_from_cartan, validate_cartan)
from app.errors import InvalidCartanMatrix, UnsupportedRank


def _ad(g, i) -> sympy.Matrix:
    return sympy.Matrix(g.adjoint_matrix(i).to_dense())


@lru_cache(maxsize=1)
def _b3():
    return chevalley_structure_constants(roots_from_cartan(cartan_matrix("B3")))


class TestCartan:
    @pytest.mark.parametrize("name, positive", [
        ("A1", 1), ("A2", 3), ("A3", 6), ("B2", 4), ("B3", 9), ("C3", 9), ("D4", 12),
        ("G2", 6), ("F4", 24), ("E6", 36), ("E7", 63), ("E8", 120),
    ])
    def test_positive_root_counts(self, name, positive):
        roots = roots_from_cartan(cartan_matrix(name))
        assert len(roots.positive_roots) == positive
        print(f"\n✓ {name}: {positive} racines positives")

    def test_highest_root_g2(self):
        roots = roots_from_cartan(cartan_matrix("G2"))
        assert roots.highest_root == (3, 2)

    @pytest.mark.parametrize("entries", [
        [[2, -1], [0, 2]],    # zéros non symétriques
        [[2, 1], [1, 2]],     # entrée positive
        [[3, -1], [-1, 2]],   # diagonale != 2
        [[2, 0], [0, 2]],     # non connexe
        [[2, -1, 0], [-1, 2]],
        [],
    ])
    def test_invalid_matrices(self, entries):
        with pytest.raises(InvalidCartanMatrix):
            validate_cartan(entries)

    def test_affine_matrix_rejected(self):
        cartan = parse_cartan_text("2\n2 -2\n-2 2\n")
        with pytest.raises(InvalidCartanMatrix):
            roots_from_cartan(cartan)

    def test_unknown_and_oversized_types(self):
        with pytest.raises(InvalidCartanMatrix):
            cartan_matrix("X3")
        with pytest.raises(InvalidCartanMatrix):
            cartan_matrix("E5")
        with pytest.raises(UnsupportedRank):
            cartan_matrix("A9")

    def test_custom_file(self, tmp_path):
        path = tmp_path / "a2.txt"
        path.write_text("# A2\n2\n2 -1\n-1 2\n")
        cartan = load_cartan_file(path)
        assert cartan.entries == cartan_matrix("A2").entries
        assert cartan.name == "custom"

    def test_unreadable_file(self):
        with pytest.raises(InvalidCartanMatrix):
            parse_cartan_text("2\n2 x\n")


class TestChevalleyBasis:
    @pytest.mark.parametrize("fixture, dim", [("a1", 3), ("a2", 8), ("b2", 10), ("g2", 14)])
    def test_dimension(self, request, fixture, dim):
        g = request.getfixturevalue(fixture)
        assert g.dim == dim

    def test_sl2_labels_and_brackets(self, a1):
        b = a1.basis
        assert b.labels == ("e[1]", "f[1]", "h1")
        e, f, h = (b.index(x) for x in b.labels)
        assert b.bracket(e, f) == {h: 1}
        assert b.bracket(h, e) == {e: 2}
        assert b.bracket(h, f) == {f: -2}

    @pytest.mark.parametrize("fixture", ["a2", "b2", "g2"])
    def test_jacobi_exhaustive(self, request, fixture):
        g = request.getfixturevalue(fixture)
        assert g.basis.jacobi_violations() == []

    @pytest.mark.parametrize("fixture", ["a1", "a2", "b2", "g2"])
    def test_antisymmetry(self, request, fixture):
        b = request.getfixturevalue(fixture).basis
        for i, j in product(range(b.dim), repeat=2):
            assert b.bracket(i, j) == {k: -c for k, c in b.bracket(j, i).items()}

    def test_integer_structure_constants(self, g2):
        b = g2.basis
        for i, j in product(range(b.dim), repeat=2):
            assert all(Fraction(c).denominator == 1 for c in b.bracket(i, j).values())

    @given(st.data())
    def test_jacobi_random_triples_b3(self, data):
        b = _b3()
        triples = data.draw(st.lists(st.tuples(*(st.integers(0, b.dim - 1),) * 3), min_size=1, max_size=30))
        assert b.jacobi_violations(triples) == []


class TestKillingForm:
    def test_sl2_values(self, a1):
        k = a1.killing
        e, f, h = 0, 1, 2
        assert k(e, f) == 4
        assert k(h, h) == 8
        assert k(e, e) == 0
        assert k(e, h) == 0

    @pytest.mark.parametrize("fixture", ["a1", "a2", "b2"])
    def test_matches_adjoint_trace_oracle(self, request, fixture):
        g = request.getfixturevalue(fixture)
        ads = [_ad(g.basis, i) for i in range(g.dim)]
        for i, j in product(range(g.dim), repeat=2):
            assert g.killing(i, j) == (ads[i] * ads[j]).trace()

    def test_a2_determinant(self, a2):
        assert a2.killing.determinant() == -5038848
        assert a2.killing.rank() == 8

    @pytest.mark.parametrize("fixture, hv", [("a1", 2), ("a2", 3), ("b2", 3), ("g2", 4)])
    def test_dual_coxeter(self, request, fixture, hv):
        g = request.getfixturevalue(fixture)
        assert dual_coxeter_number(g.basis, g.killing) == hv

    def test_invariance(self, b2):
        b, k = b2.basis, b2.killing
        for x, y, z in product(range(b.dim), repeat=3):
            assert k.value(b.bracket(x, y), {z: 1}) == k.value({x: 1}, b.bracket(y, z))

    def test_normalized_form(self, a1):
        form = normalized_form(a1.basis, a1.killing)
        assert form.normalized_form
        assert form(0, 1) == 1
        assert form(2, 2) == 2
        g = build_simple_lie("A1", normalize=True)
        assert g.form == form
        assert g.killing == killing_form(g.basis)
