"""
Dérivations graduées des algèbres tronquées.

Une dérivation D: 𝔊 → V de degré n vérifie D[x, y] = x.D(y) − y.D(x), avec
x.v = [x, v]. Les inconnues sont les coefficients D(a)_t pour a dans le
domaine et t dans la cible avec deg t = deg a + n ; une équation n'est imposée
que si deg a, deg b, deg a + deg b, deg a + n, deg b + n et deg a + deg b + n
restent dans la fenêtre.

Les comparaisons Der/Inn se font après restriction à l'intérieur: colonnes
dont le degré source est dans [−M, M], M = ⌊(N − |n|)/2⌋ par défaut. Deux
degrés intérieurs p, q vérifient |p + q| + |n| ≤ N, toutes leurs contraintes
sont donc imposées.

Hypothèse: seules les composantes homogènes sont résolues. La troncature est
de dimension finie et graduée par les valeurs propres de ad d₀, toute
dérivation y est la somme finie de ses composantes homogènes.
"""
from __future__ import annotations

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from app.algebra.affine_virasoro import (AffineVirasoro, Loop, Selector, TruncatedAlgebra,
                                         TruncationWindow)
from app.algebra.exact_linear import Rational, RowReducer, SparseMatrix, Subspace, Vector, kernel_basis
from app.errors import DimensionMismatch, InvalidProblem, WindowError

logger = logging.getLogger(__name__)

# (domaine, cible) admis ; la cible est un sous-module du domaine
ALLOWED_PAIRS = {
    (Selector.FULL, Selector.FULL),
    (Selector.FULL, Selector.GTILDE),
    (Selector.GTILDE, Selector.GTILDE),
    (Selector.GHAT, Selector.GHAT),
    (Selector.VIR, Selector.VIR),
    (Selector.QUOTIENT, Selector.QUOTIENT),
    (Selector.SIMPLE, Selector.SIMPLE),
}


# ============================================================
# TYPES
# ============================================================

@dataclass(frozen=True)
class GradedLinearMap:
    """φ de degré n: blocks[m] = {(a, t): coefficient} avec deg a = m, deg t = m + n."""
    degree: int
    blocks: Mapping[int, Mapping[tuple[int, int], Rational]]

    def image(self, a: int, source_degree: int) -> dict[int, Rational]:
        return {t: c for (s, t), c in self.blocks.get(source_degree, {}).items() if s == a}

    @property
    def is_zero(self) -> bool:
        return not any(self.blocks.values())


@dataclass(frozen=True)
class DerivationProblem:
    domain: Selector
    target: Selector
    N: int
    n: int = 0
    margin: int | None = None

    def __post_init__(self):
        if (self.domain, self.target) not in ALLOWED_PAIRS:
            raise InvalidProblem(f"paire {self.domain.value} -> {self.target.value} non prise en charge")
        if self.N < abs(self.n) + 1:
            raise WindowError(f"fenêtre N={self.N} trop petite pour le degré {self.n}")
        if self.domain is Selector.SIMPLE and self.n != 0:
            raise InvalidProblem("g seule est concentrée en degré 0")
        if self.domain is not Selector.SIMPLE and self.M < 1:
            raise WindowError(f"marge intérieure M={self.M} < 1 (N={self.N}, n={self.n})")

    @property
    def M(self) -> int:
        if self.margin is not None:
            return self.margin
        return (self.N - abs(self.n)) // 2

    @property
    def window(self) -> TruncationWindow:
        return TruncationWindow(self.N)


@dataclass(frozen=True)
class DistinguishedGamma:
    """γ(x) = [d₀, x] sur g̃, aplati dans les coordonnées GTilde -> GTilde de degré 0."""
    N: int
    vector: Vector = field(repr=False)


@dataclass(frozen=True)
class DerivationSummary:
    selector: str
    target: str
    N: int
    M: int
    n: int
    dim_der: int
    dim_inner: int
    dim_der_interior: int
    dim_inner_interior: int
    h1: int
    inner_contained: bool
    interior_equal: bool
    # faux: ligne informative, aucune égalité affirmée
    asserted: bool = True


# ============================================================
# SYSTÈME LINÉAIRE
# ============================================================

class LinearMapSystem:
    """
    Inconnues φ(a)_t d'une application graduée domaine -> cible de décalage n,
    colonnes ordonnées par a puis t.
    """

    def __init__(self, alg: TruncatedAlgebra, domain: Iterable[int], target: Iterable[int], n: int):
        self.alg = alg
        self.n = n
        self.domain = list(domain)
        self.target = list(target)
        self._by_degree: dict[int, list[int]] = defaultdict(list)
        for t in self.target:
            self._by_degree[alg.degrees[t]].append(t)
        self.columns = [(a, t) for a in self.domain for t in self.targets_of(a)]
        self.col = {c: k for k, c in enumerate(self.columns)}
        self.source_degrees = [(alg.degrees[a],) for a, _ in self.columns]

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def targets_of(self, a: int) -> list[int]:
        return self._by_degree.get(self.alg.degrees[a] + self.n, [])

    def flatten(self, image: Callable[[int], Mapping[int, Rational]]) -> Vector:
        vec: Vector = {}
        for a in self.domain:
            for t, c in image(a).items():
                if (a, t) not in self.col:
                    raise DimensionMismatch(f"image de {self.alg.labels[a]} hors de la cible: {self.alg.labels[t]}")
                vec[self.col[(a, t)]] = c
        return vec

    def to_map(self, vec: Mapping[int, Rational]) -> GradedLinearMap:
        blocks: dict[int, dict[tuple[int, int], Rational]] = defaultdict(dict)
        for k, c in vec.items():
            a, t = self.columns[k]
            blocks[self.alg.degrees[a]][(a, t)] = c
        return GradedLinearMap(self.n, dict(blocks))

    # --------------------------------------------------------
    # équations
    # --------------------------------------------------------

    def leibniz_rows(self, pairs: Iterable[tuple[int, int]]) -> Iterator[Vector]:
        """D([a,b]) − [a, D b] − [D a, b] = 0, une équation par composante."""
        ad, col = self.alg.ad, self.col
        for a, b in pairs:
            out: dict[int, Vector] = defaultdict(dict)
            for k, c in ad(a, b).items():
                for t in self.targets_of(k):
                    _accumulate(out[t], col[(k, t)], c)
            for t in self.targets_of(b):
                for u, c in ad(a, t).items():
                    _accumulate(out[u], col[(b, t)], -c)
            for t in self.targets_of(a):
                for u, c in ad(t, b).items():
                    _accumulate(out[u], col[(a, t)], -c)
            yield from (row for row in out.values() if row)

    def equivariance_rows(self, pairs: Iterable[tuple[int, int]]) -> Iterator[Vector]:
        """φ([a, x]) − [a, φ(x)] = 0 (a agit, x dans le domaine)."""
        ad, col = self.alg.ad, self.col
        for a, x in pairs:
            out: dict[int, Vector] = defaultdict(dict)
            for k, c in ad(a, x).items():
                for t in self.targets_of(k):
                    _accumulate(out[t], col[(k, t)], c)
            for t in self.targets_of(x):
                for u, c in ad(a, t).items():
                    _accumulate(out[u], col[(x, t)], -c)
            yield from (row for row in out.values() if row)

    def solve(self, rows: Iterable[Vector], tag: str = "") -> Subspace:
        started = time.perf_counter()
        reducer = RowReducer(self.ncols)
        reducer.extend(rows)
        space = reducer.kernel()
        logger.info(f"{tag} inconnues={self.ncols} équations={reducer.equations} "
                    f"rang={reducer.rank} dim={space.dim} ({time.perf_counter() - started:.2f}s)")
        return space


def _accumulate(row: dict, k: int, c: Rational) -> None:
    v = row.get(k, 0) + c
    if v:
        row[k] = v
    else:
        row.pop(k, None)


def restrict_to_interior(s: Subspace, source_degrees: Sequence[tuple[int, ...]], M: int) -> Subspace:
    """Projette sur les colonnes dont tous les degrés source sont dans [−M, M]."""
    if len(source_degrees) != s.ambient_dim:
        raise DimensionMismatch(f"{len(source_degrees)} degrés pour {s.ambient_dim} colonnes")
    return s.project(lambda c: all(-M <= d <= M for d in source_degrees[c]))


# ============================================================
# ESPACES DE DÉRIVATIONS
# ============================================================

@lru_cache(maxsize=64)
def derivation_system(L: AffineVirasoro, p: DerivationProblem) -> LinearMapSystem:
    alg = L.truncate(p.window, p.domain)
    target = alg.indices_where(lambda b: L.in_basis(b, p.window, p.target))
    return LinearMapSystem(alg, range(alg.dim), target, p.n)


def _safe_pairs(alg: TruncatedAlgebra, n: int) -> Iterator[tuple[int, int]]:
    deg = alg.degrees
    for a, b in combinations(range(alg.dim), 2):
        if alg.in_window(deg[a] + deg[b], deg[a] + n, deg[b] + n, deg[a] + deg[b] + n):
            yield a, b


@lru_cache(maxsize=64)
def derivation_space(L: AffineVirasoro, p: DerivationProblem) -> Subspace:
    system = derivation_system(L, p)
    tag = f"Der {L.g.name} {p.domain.value}->{p.target.value} N={p.N} n={p.n}"
    return system.solve(system.leibniz_rows(_safe_pairs(system.alg, p.n)), tag)


@lru_cache(maxsize=64)
def inner_derivation_space(L: AffineVirasoro, p: DerivationProblem) -> Subspace:
    """span{x ↦ x.v = [x, v]} pour v de degré n dans la cible."""
    system = derivation_system(L, p)
    alg = system.alg
    maps = [system.flatten(lambda a, v=v: alg.ad(a, v))
            for v in system.target if alg.degrees[v] == p.n]
    return Subspace.span(system.ncols, maps)


def interior(L: AffineVirasoro, p: DerivationProblem, s: Subspace) -> Subspace:
    return restrict_to_interior(s, derivation_system(L, p).source_degrees, p.M)


def h1_dimension(L: AffineVirasoro, p: DerivationProblem) -> int:
    return (interior(L, p, derivation_space(L, p)).dim
            - interior(L, p, inner_derivation_space(L, p)).dim)


def summarize(L: AffineVirasoro, p: DerivationProblem) -> DerivationSummary:
    der, inner = derivation_space(L, p), inner_derivation_space(L, p)
    der_i, inner_i = interior(L, p, der), interior(L, p, inner)
    return DerivationSummary(
        selector=p.domain.value, target=p.target.value, N=p.N, M=p.M, n=p.n,
        dim_der=der.dim, dim_inner=inner.dim,
        dim_der_interior=der_i.dim, dim_inner_interior=inner_i.dim,
        h1=der_i.dim - inner_i.dim,
        inner_contained=inner.is_subspace_of(der),
        interior_equal=der_i.basis == inner_i.basis)


# ============================================================
# LEMMES EN DIMENSION FINIE (sans troncature)
# ============================================================

def _full_at(L: AffineVirasoro, *degrees: int) -> TruncatedAlgebra:
    return L.truncate(TruncationWindow(max(1, *(abs(d) for d in degrees))), Selector.FULL)


def degree_zero_cohomology_vanishes(L: AffineVirasoro, m: int) -> bool:
    """H¹(𝔏(g)₀, g⊗t^m) = 0, calcul exact en dimension finie."""
    if m == 0:
        raise InvalidProblem("le cas m = 0 n'est pas couvert")
    alg = _full_at(L, m)
    domain = alg.of_degree(0)
    module = [i for i in alg.of_degree(m) if isinstance(alg.basis[i], Loop)]
    system = LinearMapSystem(alg, domain, module, m)
    der = system.solve(system.leibniz_rows(combinations(domain, 2)), f"H1(L0, g*t^{m}) {L.g.name}")
    inner = Subspace.span(system.ncols, [system.flatten(lambda a, v=v: alg.ad(a, v)) for v in module])
    return der.dim - inner.dim == 0


def _g_tilde(L: AffineVirasoro, alg: TruncatedAlgebra, n: int) -> list[int]:
    return [i for i in alg.of_degree(n) if L.in_basis(alg.basis[i], alg.window, Selector.GTILDE)]


def degree_zero_hom_space(L: AffineVirasoro, m: int, n: int) -> Subspace:
    """Hom_{𝔏(g)₀}(𝔏(g)_m, g̃_n)."""
    if m == n:
        raise InvalidProblem("m = n n'est pas couvert")
    alg = _full_at(L, m, n)
    source = alg.of_degree(m)
    system = LinearMapSystem(alg, source, _g_tilde(L, alg, n), n - m)
    pairs = ((a, x) for a in alg.of_degree(0) for x in source)
    return system.solve(system.equivariance_rows(pairs), f"Hom(L_{m}, g~_{n}) {L.g.name}")


def degree_zero_homs_vanish(L: AffineVirasoro, m: int, n: int) -> bool:
    return degree_zero_hom_space(L, m, n).dim == 0


def nonzero_degree_report(L: AffineVirasoro, N: int, degrees: Iterable[int],
                          margin: int | None = None) -> list[DerivationSummary]:
    """
    Der(𝔏, g̃) = Der(𝔏, g̃)₀ + Inn(𝔏, g̃): en degré n ≠ 0 tout est intérieur.
    La ligne n = 0 donne les dimensions sans rien affirmer (asserted=False).
    """
    return [replace(summarize(L, DerivationProblem(Selector.FULL, Selector.GTILDE, N, n, margin)), asserted=n != 0)
            for n in degrees]


def derivation_report(L: AffineVirasoro, N: int, degrees: Iterable[int],
                     target: Selector = Selector.FULL, margin: int | None = None) -> list[DerivationSummary]:
    return [summarize(L, DerivationProblem(Selector.FULL, target, N, n, margin)) for n in degrees]


# ============================================================
# γ, ENDOMORPHISMES DE MODULE, STABILISATION, ORACLE
# ============================================================

def distinguished_gamma(L: AffineVirasoro, N: int) -> DistinguishedGamma:
    system = derivation_system(L, DerivationProblem(Selector.GTILDE, Selector.GTILDE, N, 0))
    basis = system.alg.basis

    def gamma(a: int) -> dict[int, Rational]:
        b = basis[a]
        return {a: b.power} if isinstance(b, Loop) and b.power else {}

    return DistinguishedGamma(N, system.flatten(gamma))


@dataclass(frozen=True)
class GammaGap:
    N: int
    M: int
    dim_der_interior: int
    dim_inner_interior: int
    gamma_in_der: bool
    gamma_in_inner_interior: bool
    gap_spanned_by_gamma: bool

    @property
    def ok(self) -> bool:
        return (self.gamma_in_der and not self.gamma_in_inner_interior and self.gap_spanned_by_gamma
                and self.dim_der_interior == self.dim_inner_interior + 1)


def gamma_gap_check(L: AffineVirasoro, N: int) -> GammaGap:
    """Der(g̃)₀ = Inn(g̃)₀ ⊕ Cγ à l'intérieur."""
    p = DerivationProblem(Selector.GTILDE, Selector.GTILDE, N, 0)
    system = derivation_system(L, p)
    gamma = distinguished_gamma(L, N).vector
    der, inner = derivation_space(L, p), inner_derivation_space(L, p)
    der_i, inner_i = interior(L, p, der), interior(L, p, inner)
    gamma_i = Subspace.span(system.ncols, [gamma]).project(
        lambda c: -p.M <= system.source_degrees[c][0] <= p.M)
    return GammaGap(
        N=N, M=p.M, dim_der_interior=der_i.dim, dim_inner_interior=inner_i.dim,
        gamma_in_der=der.contains(gamma),
        gamma_in_inner_interior=gamma_i.is_subspace_of(inner_i),
        gap_spanned_by_gamma=(inner_i + gamma_i).basis == der_i.basis)


def module_endomorphisms(L: AffineVirasoro, w: TruncationWindow, s: Selector, M: int | None = None) -> Subspace:
    """
    End_L(L) en degré 0 sur la fenêtre, restreint à l'intérieur. Pour le quotient
    𝔏(g)/Z on attend les seuls scalaires (dimension 1).
    """
    alg = L.truncate(w, s)
    system = LinearMapSystem(alg, range(alg.dim), range(alg.dim), 0)
    deg = alg.degrees
    pairs = ((a, x) for a in range(alg.dim) for x in range(alg.dim) if alg.in_window(deg[a] + deg[x]))
    space = system.solve(system.equivariance_rows(pairs), f"End_L(L) {L.g.name} {s.value} N={w.N}")
    return restrict_to_interior(space, system.source_degrees, w.N // 2 if M is None else M)


@dataclass(frozen=True)
class StabilisationPoint:
    N: int
    dim_der_interior: int
    dim_inner_interior: int


def stabilisation_series(L: AffineVirasoro, domain: Selector, target: Selector, n: int, M: int,
                         windows: Iterable[int]) -> list[StabilisationPoint]:
    """Dimensions intérieures à marge M fixée pour des fenêtres croissantes."""
    out = []
    for N in windows:
        p = DerivationProblem(domain, target, N, n, margin=M)
        out.append(StabilisationPoint(N, interior(L, p, derivation_space(L, p)).dim,
                                      interior(L, p, inner_derivation_space(L, p)).dim))
    return out


def dense_derivation_space(L: AffineVirasoro) -> Subspace:
    """
    Oracle: Der(g) par résolution dense sur dim(g)² inconnues D(x_i)_j, toutes
    les paires ordonnées, élimination en un bloc. Colonnes i·dim + j, comme le
    solveur gradué en sélecteur SIMPLE.
    """
    g = L.g.basis
    dim = g.dim
    rows = []
    for i in range(dim):
        for j in range(dim):
            out: dict[int, Vector] = defaultdict(dict)
            for k, c in g.bracket(i, j).items():
                for t in range(dim):
                    _accumulate(out[t], k * dim + t, c)
            for t in range(dim):
                for u, c in g.bracket(i, t).items():
                    _accumulate(out[u], j * dim + t, -c)
                for u, c in g.bracket(t, j).items():
                    _accumulate(out[u], i * dim + t, -c)
            rows.extend(r for r in out.values() if r)
    return kernel_basis(SparseMatrix.from_rows(rows, dim * dim))


def auxiliary_report(L: AffineVirasoro, vir_window: int = 8, gtilde_window: int = 6,
                     vir_degrees: Iterable[int] = (-1, 0, 1)) -> tuple[list[DerivationSummary], GammaGap]:
    """H¹(Vir, Vir) = 0 et Der(g̃) = Inn(g̃) ⊕ Cγ."""
    rows = [summarize(L, DerivationProblem(Selector.VIR, Selector.VIR, vir_window, n)) for n in vir_degrees]
    return rows, gamma_gap_check(L, gtilde_window)
