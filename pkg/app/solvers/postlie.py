"""
Structures post-Lie commutatives x.y sur une troncature:

    x.y = y.x                              (commutativité)
    [x,y].z = x.(y.z) − y.(x.z)            (quadratique en le produit)
    x.[y,z] = [x.y, z] + [y, x.z]

Un tel produit est une bidérivation symétrique δ(x,y) = x.y. La trivialité se
vérifie donc linéairement: espace des bidérivations symétriques nul à
l'intérieur ⟹ produit nul ⟹ contrôle des trois axiomes pour le produit nul.
Aucun système quadratique n'est résolu.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from app.algebra.affine_virasoro import AffineVirasoro, D, Selector, TruncatedAlgebra, TruncationWindow
from app.algebra.exact_linear import Rational, as_rational
from app.solvers.biderivations import (BiderivationProblem, GradedBilinearMap, Symmetry, biderivation_space,
                                       identity1_safe, identity2_safe, interior, require_truncation)

logger = logging.getLogger(__name__)

MAX_WITNESSES = 3


# ============================================================
# TYPES
# ============================================================

@dataclass(frozen=True)
class BilinearProduct:
    """Somme finie de composantes homogènes ; degrees = degrés des composantes."""
    alg: TruncatedAlgebra = field(repr=False, compare=False)
    values: Mapping[tuple[int, int], Mapping[int, Rational]] = field(repr=False)
    degrees: frozenset[int] = frozenset({0})

    @classmethod
    def zero(cls, alg: TruncatedAlgebra) -> "BilinearProduct":
        return cls(alg, {}, frozenset({0}))

    @classmethod
    def from_maps(cls, *maps: GradedBilinearMap) -> "BilinearProduct":
        if not maps:
            raise ValueError("au moins une composante")
        values: dict[tuple[int, int], dict[int, Rational]] = {}
        for F in maps:
            for ab, image in F.values.items():
                target = values.setdefault(ab, {})
                for t, c in image.items():
                    v = target.get(t, 0) + c
                    if v:
                        target[t] = v
                    else:
                        target.pop(t, None)
        return cls(maps[0].alg, {ab: im for ab, im in values.items() if im},
                   frozenset(F.degree for F in maps))

    def __call__(self, a: int, b: int) -> Mapping[int, Rational]:
        return self.values.get((a, b), {})

    def left(self, u: Mapping[int, Rational], z: int) -> dict[int, Rational]:
        """u.z pour u combinaison linéaire."""
        return _combine((c, self(k, z)) for k, c in u.items())

    def right(self, x: int, u: Mapping[int, Rational]) -> dict[int, Rational]:
        """x.u pour u combinaison linéaire."""
        return _combine((c, self(x, k)) for k, c in u.items())

    def as_map(self) -> GradedBilinearMap:
        if len(self.degrees) != 1:
            raise ValueError("produit non homogène")
        return GradedBilinearMap(next(iter(self.degrees)), Symmetry.NONE, self.alg, self.values)


@dataclass(frozen=True)
class Witness:
    axiom: str
    labels: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.axiom}: ({', '.join(self.labels)})"


@dataclass(frozen=True)
class PostLieCheck:
    ok: bool
    violations: list[Witness]


def _combine(terms: Iterable[tuple[Rational, Mapping[int, Rational]]]) -> dict[int, Rational]:
    out: dict[int, Rational] = {}
    for c, vec in terms:
        for k, v in vec.items():
            out[k] = out.get(k, 0) + c * v
    return {k: as_rational(v) for k, v in out.items() if v != 0}


def _bracket(alg: TruncatedAlgebra, u: Mapping[int, Rational], v: Mapping[int, Rational]) -> dict[int, Rational]:
    return alg.bracket_vec(u, v)


def _sub(u: Mapping[int, Rational], v: Mapping[int, Rational]) -> dict[int, Rational]:
    return _combine([(1, u), (-1, v)])


def _pairs_by_degree(alg: TruncatedAlgebra) -> list[tuple[int, int]]:
    """Paires a < b, plus petite somme |deg a| + |deg b| d'abord."""
    deg = alg.degrees
    return sorted(combinations(range(alg.dim), 2), key=lambda ab: (abs(deg[ab[0]]) + abs(deg[ab[1]]), ab))


# ============================================================
# AXIOMES
# ============================================================

def _commutativity(prod: BilinearProduct) -> Iterator[Witness]:
    alg, deg = prod.alg, prod.alg.degrees
    for a, b in _pairs_by_degree(alg):
        if not all(alg.in_window(deg[a] + deg[b] + n) for n in prod.degrees):
            continue
        if dict(prod(a, b)) != dict(prod(b, a)):
            yield Witness("commutativity", (alg.labels[a], alg.labels[b]))


def _associator(prod: BilinearProduct) -> Iterator[Witness]:
    """[x,y].z = x.(y.z) − y.(x.z), triplets x < y."""
    alg, deg = prod.alg, prod.alg.degrees
    for x, y in _pairs_by_degree(alg):
        for z in range(alg.dim):
            p, q, r = deg[x], deg[y], deg[z]
            if not all(alg.in_window(p + q, q + r + n, p + r + n, p + q + r + n, p + q + r + n + m)
                       for n, m in product(prod.degrees, repeat=2)):
                continue
            lhs = prod.left(alg.ad(x, y), z)
            rhs = _sub(prod.right(x, prod(y, z)), prod.right(y, prod(x, z)))
            if lhs != rhs:
                yield Witness("bracket-product", (alg.labels[x], alg.labels[y], alg.labels[z]))


def _derivation_law(prod: BilinearProduct) -> Iterator[Witness]:
    """x.[y,z] = [x.y, z] + [y, x.z], triplets y < z."""
    alg, deg = prod.alg, prod.alg.degrees
    for y, z in _pairs_by_degree(alg):
        for x in range(alg.dim):
            p, q, r = deg[x], deg[y], deg[z]
            if not all(alg.in_window(q + r, p + q + n, p + r + n, p + q + r + n) for n in prod.degrees):
                continue
            lhs = prod.right(x, alg.ad(y, z))
            rhs = _combine([(1, _bracket(alg, prod(x, y), {z: 1})), (1, _bracket(alg, {y: 1}, prod(x, z)))])
            if lhs != rhs:
                yield Witness("derivation-law", (alg.labels[x], alg.labels[y], alg.labels[z]))


def _first(witnesses: Iterator[Witness], limit: int) -> list[Witness]:
    out = []
    for w in witnesses:
        out.append(w)
        if len(out) >= limit:
            break
    return out


def is_commutative_postlie(prod: BilinearProduct, w: TruncationWindow | None = None, s: Selector | None = None,
                           max_witnesses: int = MAX_WITNESSES) -> PostLieCheck:
    """
    Les trois axiomes sur toutes les paires et triplets sûrs ; témoins par axiome.
    La fenêtre est celle du produit (w, s optionnels, contrôlés contre prod.alg).
    """
    require_truncation(prod.alg, w, s)
    violations = []
    for axiom in (_commutativity, _associator, _derivation_law):
        violations += _first(axiom(prod), max_witnesses)
    return PostLieCheck(not violations, violations)


# ============================================================
# RÉDUCTION AUX BIDÉRIVATIONS SYMÉTRIQUES
# ============================================================

def _identity_defects(F: BilinearProduct) -> Iterator[Witness]:
    alg, deg = F.alg, F.alg.degrees
    for x, y, z in product(range(alg.dim), repeat=3):
        p, q, r = deg[x], deg[y], deg[z]
        if x < y and all(identity1_safe(alg, p, q, r, n) for n in F.degrees):
            # F([x,y], z) − x.F(y,z) + y.F(x,z)
            defect = _combine([(1, F.left(alg.ad(x, y), z)),
                               (-1, _bracket(alg, {x: 1}, F(y, z))),
                               (1, _bracket(alg, {y: 1}, F(x, z)))])
            if defect:
                yield Witness("biderivation-left", (alg.labels[x], alg.labels[y], alg.labels[z]))
        if y < z and all(identity2_safe(alg, p, q, r, n) for n in F.degrees):
            # F(x, [y,z]) − y.F(x,z) + z.F(x,y)
            defect = _combine([(1, F.right(x, alg.ad(y, z))),
                               (-1, _bracket(alg, {y: 1}, F(x, z))),
                               (1, _bracket(alg, {z: 1}, F(x, y)))])
            if defect:
                yield Witness("biderivation-right", (alg.labels[x], alg.labels[y], alg.labels[z]))


@dataclass(frozen=True)
class BiderivationCheck:
    ok: bool
    failures: list[Witness]


def postlie_to_biderivation(prod: BilinearProduct,
                            max_witnesses: int = MAX_WITNESSES) -> tuple[GradedBilinearMap | None, BiderivationCheck]:
    """
    δ(x, y) = x.y ; contrôle des deux identités de bidérivation sur les triplets sûrs.
    δ n'est renvoyée que pour un produit homogène (None sinon, le contrôle reste fait).
    """
    failures = _first(_identity_defects(prod), max_witnesses)
    delta = prod.as_map() if len(prod.degrees) == 1 else None
    return delta, BiderivationCheck(not failures, failures)


@dataclass(frozen=True)
class PostLieSummary:
    selector: str
    N: int
    n: int
    sym_bider_dim_interior: int
    postlie_trivial: bool


def postlie_triviality_report(L: AffineVirasoro, N: int, degrees: Iterable[int],
                              selector: Selector = Selector.FULL) -> list[PostLieSummary]:
    alg = L.truncate(TruncationWindow(N), selector)
    zero_ok = is_commutative_postlie(BilinearProduct.zero(alg), alg.window, selector).ok
    rows = []
    for n in degrees:
        p = BiderivationProblem(selector, N, n, Symmetry.SYMMETRIC)
        dim = interior(L, p, biderivation_space(L, p)).dim
        rows.append(PostLieSummary(selector.value, N, n, dim, dim == 0 and zero_ok))
        logger.info(f"post-Lie {L.g.name} {selector.value} N={N} n={n}: sym intérieur={dim}")
    return rows


# ============================================================
# GÉNÉRATEURS DE PRODUITS (tests de quasi-solutions)
# ============================================================

def random_bilinear_product(alg: TruncatedAlgebra, n: int, seed: int, density: float = 0.05,
                            symmetric: bool = True) -> BilinearProduct:
    """Produit homogène de degré n à coefficients entiers aléatoires (déterministe en seed)."""
    rng = random.Random(seed)
    deg = alg.degrees
    values: dict[tuple[int, int], dict[int, Rational]] = {}
    for a in range(alg.dim):
        for b in range(a if symmetric else 0, alg.dim):
            for t in alg.of_degree(deg[a] + deg[b] + n):
                if rng.random() < density:
                    c = rng.choice([-3, -2, -1, 1, 2, 3])
                    values.setdefault((a, b), {})[t] = c
                    if symmetric and a != b:
                        values.setdefault((b, a), {})[t] = c
    return BilinearProduct(alg, values, frozenset({n}))


def corrupt(prod: BilinearProduct, seed: int) -> BilinearProduct:
    """
    Ajoute un unique coefficient non symétrique c·t à prod(a, b). Avec
    deg a + n ≠ 0 et d₀ dans la base, l'identité (2) sur (a, d₀, b) échoue.
    """
    alg, deg = prod.alg, prod.alg.degrees
    n = min(prod.degrees)
    candidates = [(a, b, t) for a, b in combinations(range(alg.dim), 2)
                  if D(0) not in (alg.basis[a], alg.basis[b])
                  and deg[a] + n != 0 and alg.in_window(deg[a] + n, deg[b] + n)
                  for t in alg.of_degree(deg[a] + deg[b] + n)]
    if not candidates:
        raise ValueError("aucune position à corrompre")
    rng = random.Random(seed)
    a, b, t = rng.choice(candidates)
    values = {ab: dict(image) for ab, image in prod.values.items()}
    image = values.setdefault((a, b), {})
    image[t] = image.get(t, 0) + rng.choice([1, 2, 3])
    if not image[t]:
        del image[t]
    return BilinearProduct(alg, values, prod.degrees)
