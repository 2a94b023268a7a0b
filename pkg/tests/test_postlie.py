"""
Tests des structures post-Lie commutatives.
"""
import pytest

from app.algebra.affine_virasoro import Selector, TruncationWindow
from app.errors import DimensionMismatch
from app.solvers.biderivations import GradedBilinearMap, Symmetry, inner_biderivation
from app.solvers.postlie import (BilinearProduct, corrupt, is_commutative_postlie, postlie_to_biderivation,
                                 postlie_triviality_report, random_bilinear_product)

W3 = TruncationWindow(3)


@pytest.fixture(scope="module")
def full3(L_a1):
    return L_a1.truncate(W3, Selector.FULL)


class TestZeroProduct:
    @pytest.mark.parametrize("selector", [Selector.FULL, Selector.QUOTIENT])
    def test_zero_product_is_postlie(self, L_a1, selector):
        check = is_commutative_postlie(BilinearProduct.zero(L_a1.truncate(W3, selector)))
        assert check.ok
        assert check.violations == []

    def test_zero_product_is_biderivation(self, full3):
        delta, check = postlie_to_biderivation(BilinearProduct.zero(full3))
        assert check.ok
        assert isinstance(delta, GradedBilinearMap)
        assert delta.degree == 0
        assert delta.is_zero

    def test_window_and_selector_must_match(self, full3):
        zero = BilinearProduct.zero(full3)
        assert is_commutative_postlie(zero, W3, Selector.FULL).ok
        with pytest.raises(DimensionMismatch):
            is_commutative_postlie(zero, TruncationWindow(4), Selector.FULL)
        with pytest.raises(DimensionMismatch):
            is_commutative_postlie(zero, W3, Selector.QUOTIENT)


class TestNonTrivialProducts:
    def test_bracket_is_not_commutative(self, L_a1):
        prod = BilinearProduct.from_maps(inner_biderivation(L_a1, 1, W3, Selector.FULL))
        check = is_commutative_postlie(prod)
        assert not check.ok
        first = check.violations[0]
        assert first.axiom == "commutativity"
        assert first.labels == ("e[1]*t^0", "f[1]*t^0")
        print(f"\n✓ témoin: {first}")

    def test_bracket_passes_biderivation_identities(self, L_a1):
        prod = BilinearProduct.from_maps(inner_biderivation(L_a1, 1, W3, Selector.FULL))
        _, check = postlie_to_biderivation(prod)
        assert check.ok, check.failures

    @pytest.mark.parametrize("seed", [1, 7])
    def test_random_product_rejected(self, full3, seed):
        prod = random_bilinear_product(full3, 0, seed)
        assert prod.values
        assert not is_commutative_postlie(prod).ok
        delta, check = postlie_to_biderivation(prod)
        assert not check.ok
        assert delta.degree == 0
        assert delta.values == prod.values

    def test_mixed_degrees_give_no_single_map(self, L_a1, full3):
        F = inner_biderivation(L_a1, 1, W3, Selector.FULL)
        shifted = GradedBilinearMap(1, Symmetry.NONE, full3, {})
        delta, _ = postlie_to_biderivation(BilinearProduct.from_maps(F, shifted))
        assert delta is None

    @pytest.mark.parametrize("seed", [0, 3, 11])
    def test_corrupted_zero_rejected(self, full3, seed):
        prod = corrupt(BilinearProduct.zero(full3), seed)
        check = is_commutative_postlie(prod)
        assert not check.ok
        assert any(w.axiom == "commutativity" for w in check.violations)
        _, bider = postlie_to_biderivation(prod)
        assert not bider.ok
        assert len(bider.failures) <= 3

    def test_from_maps_cancels(self, L_a1):
        F = inner_biderivation(L_a1, 1, W3, Selector.FULL)
        G = inner_biderivation(L_a1, -1, W3, Selector.FULL)
        prod = BilinearProduct.from_maps(F, G)
        assert prod.values == {}
        assert prod.as_map().is_zero

    def test_from_maps_requires_component(self):
        with pytest.raises(ValueError):
            BilinearProduct.from_maps()


class TestTriviality:
    def test_report_n4(self, L_a1):
        rows = postlie_triviality_report(L_a1, 4, [-1, 0, 1])
        assert [r.n for r in rows] == [-1, 0, 1]
        assert all(r.postlie_trivial and r.sym_bider_dim_interior == 0 for r in rows)

    def test_report_quotient(self, L_a1):
        [row] = postlie_triviality_report(L_a1, 4, [0], Selector.QUOTIENT)
        assert row.selector == "quotient"
        assert row.postlie_trivial

    @pytest.mark.slow
    def test_report_a2(self, L_a2):
        [row] = postlie_triviality_report(L_a2, 3, [0])
        assert row.postlie_trivial
