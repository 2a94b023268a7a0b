"""
Bidérivations graduées F: L × L → L de degré n.

    F([x,y], z) = x.F(y,z) − y.F(x,z)      (1)
    F(x, [y,z]) = y.F(x,z) − z.F(x,y)      (2)

Inconnues: F(a,b)_t avec deg t = deg a + deg b + n. La symétrie est
structurelle: on ne stocke que a ≤ b (symétrique) ou a < b (antisymétrique),
F(b,a) se lit avec le signe. Pour F symétrique ou antisymétrique, (2) sur
(x,y,z) est au signe près (1) sur (y,z,x): seule (1) est imposée.

Une identité n'est imposée sur un triplet de degrés (p,q,r) que si tous ses
termes sont représentables dans la fenêtre:
    (1): p+q, q+r+n, p+r+n, p+q+r+n ∈ [−N, N]
    (2): q+r, p+r+n, p+q+n, p+q+r+n ∈ [−N, N]
Intérieur: M = ⌊(N − |n|)/3⌋, les deux arguments de degré dans [−M, M].

Hypothèse: comme pour les dérivations, seules les composantes homogènes sont
résolues ; l'oracle dense (sans décomposition) le contrôle à petite fenêtre.
"""
from __future__ import annotations

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.algebra.affine_virasoro import AffineVirasoro, Central, Selector, TruncatedAlgebra, TruncationWindow
from app.algebra.exact_linear import Rational, RowReducer, SparseMatrix, Subspace, Vector, as_rational, kernel_basis
from app.algebra.simple_lie import ChevalleyBasis
from app.errors import DimensionMismatch, InvalidProblem, WindowError
from app.solvers.derivations import _accumulate, restrict_to_interior

logger = logging.getLogger(__name__)


class Symmetry(str, Enum):
    SYMMETRIC = "sym"
    SKEW = "skew"
    NONE = "none"


# ============================================================
# TYPES
# ============================================================

@dataclass(frozen=True)
class GradedBilinearMap:
    """F de degré n sur une troncature ; values[(a, b)] = F(a, b), toutes paires ordonnées."""
    degree: int
    symmetry: Symmetry
    alg: TruncatedAlgebra = field(repr=False, compare=False)
    values: Mapping[tuple[int, int], Mapping[int, Rational]] = field(repr=False)

    def __call__(self, a: int, b: int) -> Mapping[int, Rational]:
        return self.values.get((a, b), {})

    @property
    def blocks(self) -> dict[tuple[int, int], dict[tuple[int, int, int], Rational]]:
        deg = self.alg.degrees
        out: dict[tuple[int, int], dict] = defaultdict(dict)
        for (a, b), image in self.values.items():
            for t, c in image.items():
                out[(deg[a], deg[b])][(a, b, t)] = c
        return dict(out)

    @property
    def is_zero(self) -> bool:
        return not any(self.values.values())


@dataclass(frozen=True)
class BiderivationProblem:
    selector: Selector
    N: int
    n: int = 0
    symmetry: Symmetry = Symmetry.NONE
    margin: int | None = None

    def __post_init__(self):
        if self.N < abs(self.n) + 1:
            raise WindowError(f"fenêtre N={self.N} trop petite pour le degré {self.n}")

    @property
    def M(self) -> int:
        """Marge intérieure ; validée à l'usage (l'oracle dense travaille sans intérieur)."""
        m = self.margin if self.margin is not None else (self.N - abs(self.n)) // 3
        if m < 1 and self.selector is not Selector.SIMPLE:
            raise WindowError(f"marge intérieure M={m} < 1 (N={self.N}, n={self.n})")
        return m

    @property
    def window(self) -> TruncationWindow:
        return TruncationWindow(self.N)


@dataclass(frozen=True)
class BiderivationSummary:
    selector: str
    N: int
    M: int
    n: int
    symmetry: str
    dim_raw: int
    dim_interior: int
    contains_F1: bool | None
    center_annihilation_ok: bool | None


# ============================================================
# SYSTÈME LINÉAIRE
# ============================================================

def identity1_safe(alg: TruncatedAlgebra, p: int, q: int, r: int, n: int) -> bool:
    return alg.in_window(p + q, q + r + n, p + r + n, p + q + r + n)


def identity2_safe(alg: TruncatedAlgebra, p: int, q: int, r: int, n: int) -> bool:
    return alg.in_window(q + r, p + r + n, p + q + n, p + q + r + n)


class BilinearSystem:
    def __init__(self, alg: TruncatedAlgebra, n: int, symmetry: Symmetry):
        self.alg = alg
        self.n = n
        self.symmetry = symmetry
        deg = alg.degrees
        self._by_degree: dict[int, list[int]] = defaultdict(list)
        for t in range(alg.dim):
            self._by_degree[deg[t]].append(t)
        columns = []
        for a in range(alg.dim):
            for b in range(alg.dim):
                if self._stored(a, b):
                    columns += [(a, b, t) for t in self.targets_of(a, b)]
        self.columns = columns
        self.col = {c: k for k, c in enumerate(columns)}
        self.source_degrees = [(deg[a], deg[b]) for a, b, _ in columns]

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def _stored(self, a: int, b: int) -> bool:
        if self.symmetry is Symmetry.SYMMETRIC:
            return a <= b
        if self.symmetry is Symmetry.SKEW:
            return a < b
        return True

    def ref(self, a: int, b: int) -> tuple[int, int, int] | None:
        """(a', b', signe) tel que F(a, b) = signe · F(a', b') stocké ; None si F(a, b) = 0."""
        if self.symmetry is Symmetry.NONE:
            return a, b, 1
        if a == b and self.symmetry is Symmetry.SKEW:
            return None
        if a <= b:
            return a, b, 1
        return b, a, (1 if self.symmetry is Symmetry.SYMMETRIC else -1)

    def targets_of(self, a: int, b: int) -> list[int]:
        return self._by_degree.get(self.alg.degrees[a] + self.alg.degrees[b] + self.n, [])

    def _add_value(self, row_of: dict, a: int, b: int, factor: Rational, act: int | None) -> None:
        """row += factor · (act . F(a,b)) si act est donné, sinon factor · F(a,b)."""
        ref = self.ref(a, b)
        if ref is None:
            return
        a2, b2, sign = ref
        ad, col = self.alg.ad, self.col
        for t in self.targets_of(a, b):
            k = col[(a2, b2, t)]
            if act is None:
                _accumulate(row_of[t], k, sign * factor)
            else:
                for u, c in ad(act, t).items():
                    _accumulate(row_of[u], k, sign * factor * c)

    def identity1_rows(self) -> Iterator[Vector]:
        alg, deg, n = self.alg, self.alg.degrees, self.n
        for x, y in combinations(range(alg.dim), 2):
            bracket = alg.ad(x, y)
            for z in range(alg.dim):
                if not identity1_safe(alg, deg[x], deg[y], deg[z], n):
                    continue
                out: dict[int, Vector] = defaultdict(dict)
                for k, c in bracket.items():
                    self._add_value(out, k, z, c, None)
                self._add_value(out, y, z, -1, x)
                self._add_value(out, x, z, 1, y)
                yield from (row for row in out.values() if row)

    def identity2_rows(self) -> Iterator[Vector]:
        alg, deg, n = self.alg, self.alg.degrees, self.n
        for y, z in combinations(range(alg.dim), 2):
            bracket = alg.ad(y, z)
            for x in range(alg.dim):
                if not identity2_safe(alg, deg[x], deg[y], deg[z], n):
                    continue
                out: dict[int, Vector] = defaultdict(dict)
                for k, c in bracket.items():
                    self._add_value(out, x, k, c, None)
                self._add_value(out, x, z, -1, y)
                self._add_value(out, x, y, 1, z)
                yield from (row for row in out.values() if row)

    def rows(self) -> Iterator[Vector]:
        yield from self.identity1_rows()
        if self.symmetry is Symmetry.NONE:
            yield from self.identity2_rows()

    def flatten(self, F: GradedBilinearMap) -> Vector:
        """Coordonnées de F sur les paires stockées ; F doit être de degré n."""
        vec: Vector = {}
        for (a, b), image in F.values.items():
            ref = self.ref(a, b)
            if ref is None or ref[:2] != (a, b):
                continue
            for t, c in image.items():
                k = self.col.get((a, b, t))
                if k is None:
                    raise DimensionMismatch(
                        f"F({self.alg.labels[a]}, {self.alg.labels[b]}) a une composante hors degré {self.n}")
                vec[k] = c
        return vec

    def to_map(self, vec: Mapping[int, Rational]) -> GradedBilinearMap:
        values: dict[tuple[int, int], dict[int, Rational]] = defaultdict(dict)
        for k, c in vec.items():
            a, b, t = self.columns[k]
            values[(a, b)][t] = c
            if a != b and self.symmetry is not Symmetry.NONE:
                values[(b, a)][t] = c if self.symmetry is Symmetry.SYMMETRIC else -c
        return GradedBilinearMap(self.n, self.symmetry, self.alg, dict(values))

    def solve(self, tag: str) -> Subspace:
        started = time.perf_counter()
        reducer = RowReducer(self.ncols)
        reducer.extend(self.rows())
        space = reducer.kernel()
        logger.info(f"{tag} inconnues={self.ncols} équations={reducer.equations} "
                    f"rang={reducer.rank} dim={space.dim} ({time.perf_counter() - started:.2f}s)")
        return space


# ============================================================
# ESPACES DE BIDÉRIVATIONS
# ============================================================

@lru_cache(maxsize=64)
def biderivation_system(L: AffineVirasoro, p: BiderivationProblem) -> BilinearSystem:
    return BilinearSystem(L.truncate(p.window, p.selector), p.n, p.symmetry)


@lru_cache(maxsize=64)
def biderivation_space(L: AffineVirasoro, p: BiderivationProblem) -> Subspace:
    return biderivation_system(L, p).solve(
        f"Bider {L.g.name} {p.selector.value} {p.symmetry.value} N={p.N} n={p.n}")


def interior(L: AffineVirasoro, p: BiderivationProblem, s: Subspace) -> Subspace:
    return restrict_to_interior(s, biderivation_system(L, p).source_degrees, p.M)


def inner_biderivation(L: AffineVirasoro, lam: Rational, w: TruncationWindow, s: Selector) -> GradedBilinearMap:
    """F_λ(x, y) = λ[x, y]."""
    alg = L.truncate(w, s)
    lam = as_rational(lam)
    values = {}
    if lam:
        values = {(a, b): {k: as_rational(lam * c) for k, c in alg.ad(a, b).items()}
                  for a in range(alg.dim) for b in range(alg.dim) if alg.ad(a, b)}
    return GradedBilinearMap(0, Symmetry.SKEW, alg, values)


def _central(alg: TruncatedAlgebra) -> list[int]:
    return [i for i, b in enumerate(alg.basis) if isinstance(b, Central)]


def require_truncation(alg: TruncatedAlgebra, w: TruncationWindow | None, s: Selector | None) -> None:
    """Fenêtre et sélecteur explicites: ils doivent être ceux de la troncature portée par l'objet."""
    if w is not None and w != alg.window:
        raise DimensionMismatch(f"fenêtre N={w.N} différente de celle de l'application (N={alg.N})")
    if s is not None and s is not alg.selector:
        raise DimensionMismatch(f"sélecteur {s.value} différent de celui de l'application ({alg.selector.value})")


def center_annihilation_check(F: GradedBilinearMap, w: TruncationWindow | None = None,
                              s: Selector | None = None) -> bool:
    """
    F(a, z) = F(z, a) = 0 pour z ∈ {K₁, K₂} ∩ base. La troncature est celle
    de F ; w et s, s'ils sont donnés, doivent coïncider avec elle.
    """
    alg = F.alg
    require_truncation(alg, w, s)
    return all(not F(a, z) and not F(z, a) for z in _central(alg) for a in range(alg.dim))


def _contains_f1(L: AffineVirasoro, p: BiderivationProblem, space: Subspace) -> bool | None:
    if p.n != 0 or p.symmetry is Symmetry.SYMMETRIC:
        return None
    system = biderivation_system(L, p)
    return space.contains(system.flatten(inner_biderivation(L, 1, p.window, p.selector)))


def summarize(L: AffineVirasoro, p: BiderivationProblem) -> BiderivationSummary:
    system = biderivation_system(L, p)
    space = biderivation_space(L, p)
    annihilation = None
    if _central(system.alg):
        annihilation = all(center_annihilation_check(system.to_map(v)) for v in space.vectors())
    return BiderivationSummary(
        selector=p.selector.value, N=p.N, M=p.M, n=p.n, symmetry=p.symmetry.value,
        dim_raw=space.dim, dim_interior=interior(L, p, space).dim,
        contains_F1=_contains_f1(L, p, space),
        center_annihilation_ok=annihilation)


def interior_contains_f1(L: AffineVirasoro, p: BiderivationProblem) -> bool:
    system = biderivation_system(L, p)
    f1 = Subspace.span(system.ncols, [system.flatten(inner_biderivation(L, 1, p.window, p.selector))])
    return interior(L, p, f1).is_subspace_of(interior(L, p, biderivation_space(L, p)))


# ============================================================
# QUOTIENT 𝔏(g)/Z
# ============================================================

def induced_quotient_map(L: AffineVirasoro, F: GradedBilinearMap) -> GradedBilinearMap:
    """F ↦ F̄ sur 𝔏(g)/Z: lignes et colonnes centrales supprimées."""
    w = F.alg.window
    quotient = L.truncate(w, Selector.QUOTIENT)
    values: dict[tuple[int, int], dict[int, Rational]] = {}
    for (a, b), image in F.values.items():
        ba, bb = F.alg.basis[a], F.alg.basis[b]
        if isinstance(ba, Central) or isinstance(bb, Central):
            continue
        reduced = {quotient.index[F.alg.basis[t]]: c for t, c in image.items()
                   if not isinstance(F.alg.basis[t], Central)}
        if reduced:
            values[(quotient.index[ba], quotient.index[bb])] = reduced
    return GradedBilinearMap(F.degree, F.symmetry, quotient, values)


@dataclass(frozen=True)
class QuotientRow:
    N: int
    n: int
    dim_full_interior: int
    dim_quotient_interior: int
    image_in_quotient_space: bool
    injective_on_interior: bool


def quotient_comparison(L: AffineVirasoro, N: int, degrees: Iterable[int] = (0,)) -> list[QuotientRow]:
    """Espaces antisymétriques de 𝔏(g) et 𝔏(g)/Z ; F ↦ F̄ injective à l'intérieur."""
    rows = []
    for n in degrees:
        full = BiderivationProblem(Selector.FULL, N, n, Symmetry.SKEW)
        quot = BiderivationProblem(Selector.QUOTIENT, N, n, Symmetry.SKEW)
        full_space, quot_space = biderivation_space(L, full), biderivation_space(L, quot)
        quot_system = biderivation_system(L, quot)
        full_system = biderivation_system(L, full)
        image = Subspace.span(quot_system.ncols, [
            quot_system.flatten(induced_quotient_map(L, full_system.to_map(v))) for v in full_space.vectors()])
        full_i = interior(L, full, full_space)
        rows.append(QuotientRow(
            N=N, n=n, dim_full_interior=full_i.dim,
            dim_quotient_interior=interior(L, quot, quot_space).dim,
            image_in_quotient_space=image.is_subspace_of(quot_space),
            injective_on_interior=interior(L, quot, image).dim == full_i.dim))
    return rows


# ============================================================
# CONTRÔLES STRUCTURELS
# ============================================================

def bracket_factorisation_check(F: GradedBilinearMap, M: int) -> bool:
    """
    Sur l'intérieur, F(a, b) ne dépend de (a, b) qu'à travers [a, b]: toute
    combinaison Σ c_ab (a, b) avec Σ c_ab [a, b] = 0 vérifie Σ c_ab F(a, b) = 0.
    """
    alg = F.alg
    inside = [i for i in range(alg.dim) if -M <= alg.degrees[i] <= M]
    by_degree: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a, b in combinations(inside, 2):
        by_degree[alg.degrees[a] + alg.degrees[b]].append((a, b))
    for pairs in by_degree.values():
        bracket = defaultdict(dict)
        for j, (a, b) in enumerate(pairs):
            for k, c in alg.ad(a, b).items():
                bracket[k][j] = c
        relations = kernel_basis(SparseMatrix.from_rows(list(bracket.values()), len(pairs)))
        for rel in relations.vectors():
            total: dict[int, Rational] = {}
            for j, c in rel.items():
                for t, v in F(*pairs[j]).items():
                    total[t] = total.get(t, 0) + c * v
            if any(v != 0 for v in total.values()):
                return False
    return True


@dataclass(frozen=True)
class DecompositionReport:
    N: int
    n: int
    dim_none: int
    dim_sym: int
    dim_skew: int
    intersection_zero: bool
    sum_equal: bool

    @property
    def ok(self) -> bool:
        return self.intersection_zero and self.sum_equal and self.dim_none == self.dim_sym + self.dim_skew


def decomposition_check(L: AffineVirasoro, selector: Selector, N: int, n: int) -> DecompositionReport:
    """Bider(n) = Bider_sym(n) ⊕ Bider_skew(n), dans les coordonnées sans symétrie."""
    problems = {s: BiderivationProblem(selector, N, n, s) for s in Symmetry}
    none = biderivation_system(L, problems[Symmetry.NONE])
    embedded = {}
    for s in (Symmetry.SYMMETRIC, Symmetry.SKEW):
        system = biderivation_system(L, problems[s])
        embedded[s] = Subspace.span(none.ncols, [none.flatten(system.to_map(v))
                                                 for v in biderivation_space(L, problems[s]).vectors()])
    sym, skew = embedded[Symmetry.SYMMETRIC], embedded[Symmetry.SKEW]
    full = biderivation_space(L, problems[Symmetry.NONE])
    return DecompositionReport(
        N=N, n=n, dim_none=full.dim, dim_sym=sym.dim, dim_skew=skew.dim,
        intersection_zero=sym.intersection(skew).dim == 0,
        sum_equal=(sym + skew).basis == full.basis)


# ============================================================
# ORACLE DENSE
# ============================================================

@dataclass(frozen=True)
class DenseBiderivations:
    alg: TruncatedAlgebra = field(repr=False)
    space: Subspace

    def column(self, a: int, b: int, t: int) -> int:
        d = self.alg.dim
        return (a * d + b) * d + t

    def shift(self, k: int) -> int:
        d = self.alg.dim
        a, rest = divmod(k, d * d)
        b, t = divmod(rest, d)
        deg = self.alg.degrees
        return deg[t] - deg[a] - deg[b]


def dense_biderivation_space(L: AffineVirasoro, w: TruncationWindow, s: Selector) -> DenseBiderivations:
    """
    Résolution sans décomposition ni solveur maison: toutes les inconnues
    F(a,b)_t (colonnes (a·dim + b)·dim + t), crochets recalculés sur une
    fenêtre large, chaque triplet ordonné, chaque composante u dont toutes les
    valeurs F référencées existent dans la fenêtre ; noyau par sympy sur QQ.
    """
    alg = L.truncate(w, s)
    basis, dim, deg = alg.basis, alg.dim, alg.degrees
    wide = TruncationWindow(3 * w.N)
    br = {}
    for a in range(dim):
        for b in range(dim):
            value = L.bracket(basis[a], basis[b], wide, s)
            br[a, b] = {alg.index[k]: c for k, c in value.items() if k in alg.index}
    by_degree: dict[int, list[int]] = defaultdict(list)
    for t in range(dim):
        by_degree[deg[t]].append(t)
    col = lambda a, b, t: (a * dim + b) * dim + t  # noqa: E731

    def add(row, k, c):
        row[k] = row.get(k, 0) + c

    started = time.perf_counter()
    rows: set[tuple] = set()
    for x in range(dim):
        for y in range(dim):
            for z in range(dim):
                p, q, r = deg[x], deg[y], deg[z]
                for u in range(dim):
                    # F([x,y],z) - [x,F(y,z)] + [y,F(x,z)], composante u
                    if w.contains(p + q) and w.contains(deg[u] - p) and w.contains(deg[u] - q):
                        row: dict[int, Rational] = {}
                        for k, c in br[x, y].items():
                            add(row, col(k, z, u), c)
                        for t in by_degree[deg[u] - p]:
                            add(row, col(y, z, t), -br[x, t].get(u, 0))
                        for t in by_degree[deg[u] - q]:
                            add(row, col(x, z, t), br[y, t].get(u, 0))
                        rows.add(tuple(sorted((k, v) for k, v in row.items() if v)))
                    # F(x,[y,z]) - [y,F(x,z)] + [z,F(x,y)], composante u
                    if w.contains(q + r) and w.contains(deg[u] - q) and w.contains(deg[u] - r):
                        row = {}
                        for k, c in br[y, z].items():
                            add(row, col(x, k, u), c)
                        for t in by_degree[deg[u] - q]:
                            add(row, col(x, z, t), -br[y, t].get(u, 0))
                        for t in by_degree[deg[u] - r]:
                            add(row, col(x, y, t), br[z, t].get(u, 0))
                        rows.add(tuple(sorted((k, v) for k, v in row.items() if v)))
    rows.discard(())
    ncols = dim ** 3
    if not rows:
        space = Subspace.full(ncols)
    else:
        matrix = DomainMatrix({i: {k: QQ(v.numerator, v.denominator) for k, v in row}
                               for i, row in enumerate(rows)}, (len(rows), ncols), QQ)
        null = matrix.nullspace().to_sparse().rep
        to_q = lambda v: as_rational(Fraction(int(v.numerator), int(v.denominator)))  # noqa: E731
        space = Subspace.span(ncols, ({k: to_q(v) for k, v in vec.items()} for vec in null.values()))
    logger.info(f"Bider dense {L.g.name} {s.value} N={w.N} inconnues={ncols} "
                f"équations={len(rows)} dim={space.dim} ({time.perf_counter() - started:.2f}s)")
    return DenseBiderivations(alg, space)


@dataclass(frozen=True)
class OracleRow:
    n: int
    dim_graded: int
    dim_dense_projection: int
    equal: bool


def oracle_comparison(L: AffineVirasoro, w: TruncationWindow, s: Selector,
                      degrees: Iterable[int]) -> list[OracleRow]:
    """Projection homogène de l'espace dense = sortie du solveur par degré."""
    dense = dense_biderivation_space(L, w, s)
    rows = []
    for n in degrees:
        system = biderivation_system(L, BiderivationProblem(s, w.N, n, Symmetry.NONE))
        graded = biderivation_space(L, BiderivationProblem(s, w.N, n, Symmetry.NONE))
        embedded = graded.embed(dense.space.ambient_dim,
                                lambda v: {dense.column(*system.columns[k]): c for k, c in v.items()})
        projected = dense.space.project(lambda k, n=n: dense.shift(k) == n)
        rows.append(OracleRow(n, graded.dim, projected.dim, embedded.basis == projected.basis))
    return rows


# ============================================================
# CAS DE BASE SEMI-SIMPLES (dimension finie)
# ============================================================

@dataclass(frozen=True)
class FiniteModule:
    """Module de dimension finie sur g: action[(x, v)] = x.v."""
    name: str
    dim: int
    action: Mapping[tuple[int, int], Mapping[int, Rational]] = field(repr=False)

    def act(self, x: int, v: int) -> Mapping[int, Rational]:
        return self.action.get((x, v), {})


def adjoint_module(g: ChevalleyBasis) -> FiniteModule:
    return FiniteModule("adjoint", g.dim, {(x, v): g.bracket(x, v) for x in range(g.dim) for v in range(g.dim)
                                           if g.bracket(x, v)})


def trivial_module(dim: int = 1) -> FiniteModule:
    return FiniteModule("trivial", dim, {})


def mixed_condition_space(g: ChevalleyBasis, V: FiniteModule) -> Subspace:
    """
    δ: g × V → V avec (1) δ(x, ·) homomorphisme de g-modules et (2) δ(·, v)
    dérivation g → V. Colonnes (x·dim V + v)·dim V + w.
    """
    dv = V.dim
    col = lambda x, v, w: (x * dv + v) * dv + w  # noqa: E731
    reducer = RowReducer(g.dim * dv * dv)
    for x in range(g.dim):
        for y in range(g.dim):
            for v in range(dv):
                # δ(x, y.v) − y.δ(x, v) = 0
                out: dict[int, Vector] = defaultdict(dict)
                for k, c in V.act(y, v).items():
                    for w in range(dv):
                        _accumulate(out[w], col(x, k, w), c)
                for w in range(dv):
                    for u, c in V.act(y, w).items():
                        _accumulate(out[u], col(x, v, w), -c)
                reducer.extend(r for r in out.values() if r)
    for x, y in combinations(range(g.dim), 2):
        for v in range(dv):
            # δ([x,y], v) − x.δ(y, v) + y.δ(x, v) = 0
            out = defaultdict(dict)
            for k, c in g.bracket(x, y).items():
                for w in range(dv):
                    _accumulate(out[w], col(k, v, w), c)
            for w in range(dv):
                for u, c in V.act(x, w).items():
                    _accumulate(out[u], col(y, v, w), -c)
                for u, c in V.act(y, w).items():
                    _accumulate(out[u], col(x, v, w), c)
            reducer.extend(r for r in out.values() if r)
    return reducer.kernel()


def symmetric_base_space(g: ChevalleyBasis, V: FiniteModule) -> Subspace:
    """Bidérivations symétriques δ: g × g → V ; colonnes (a ≤ b, w)."""
    pairs = [(a, b) for a in range(g.dim) for b in range(a, g.dim)]
    index = {ab: k for k, ab in enumerate(pairs)}
    dv = V.dim
    col = lambda a, b, w: index[(min(a, b), max(a, b))] * dv + w  # noqa: E731
    reducer = RowReducer(len(pairs) * dv)
    for x, y in combinations(range(g.dim), 2):
        for z in range(g.dim):
            # δ([x,y], z) − x.δ(y, z) + y.δ(x, z) = 0
            out: dict[int, Vector] = defaultdict(dict)
            for k, c in g.bracket(x, y).items():
                for w in range(dv):
                    _accumulate(out[w], col(k, z, w), c)
            for w in range(dv):
                for u, c in V.act(x, w).items():
                    _accumulate(out[u], col(y, z, w), -c)
                for u, c in V.act(y, w).items():
                    _accumulate(out[u], col(x, z, w), c)
            reducer.extend(r for r in out.values() if r)
    return reducer.kernel()


@dataclass(frozen=True)
class SemisimpleBaseReport:
    algebra: str
    dims: Mapping[str, int]

    @property
    def ok(self) -> bool:
        return all(d == 0 for d in self.dims.values())


def semisimple_base_checks(g: ChevalleyBasis) -> SemisimpleBaseReport:
    if g.dim > 14:
        raise InvalidProblem(f"dim g = {g.dim} > 14")
    adjoint, trivial = adjoint_module(g), trivial_module()
    return SemisimpleBaseReport(g.name, {
        "mixed_adjoint": mixed_condition_space(g, adjoint).dim,
        "symmetric_adjoint": symmetric_base_space(g, adjoint).dim,
        "symmetric_trivial": symmetric_base_space(g, trivial).dim,
    })
