"""
Algèbre de Lie simple complexe g, construite à partir de sa matrice de Cartan.

Conventions:
- A_ij = ⟨α_i∨, α_j⟩ = 2(α_i, α_j)/(α_i, α_i), numérotation de Bourbaki.
- Racines en coordonnées entières dans la base des racines simples.
- Base de Chevalley {e_α, f_α (α > 0), h_i} ordonnée: e_α, puis f_α, puis h_i ;
  racines positives triées par hauteur puis lexicographiquement.
- [e_α, f_α] = h_α (coracine), [h_i, e_α] = ⟨α, α_i∨⟩ e_α, et
  N_{−α,−β} = −N_{α,β} (involution de Chevalley e_α ↦ −f_α).
- Signes: N_{α,β} = +(p+1) sur les paires extraspéciales (convention de
  Carter). Les autres constantes sont imposées par l'identité de Jacobi.
"""
from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from app.algebra.exact_linear import Rational, SparseMatrix, as_rational, determinant, rank
from app.config import AFFVIR_MAX_RANK
from app.errors import InvalidCartanMatrix, UnsupportedRank

logger = logging.getLogger(__name__)

Root = tuple[int, ...]
GElement = dict[int, Rational]  # indice de la base de Chevalley -> coefficient


# ============================================================
# MATRICES DE CARTAN
# ============================================================

@dataclass(frozen=True)
class CartanMatrix:
    rank: int
    entries: tuple[tuple[int, ...], ...]
    name: str = "custom"

    def __post_init__(self):
        validate_cartan(self.entries)
        if self.rank != len(self.entries):
            raise InvalidCartanMatrix(f"rang {self.rank} != taille {len(self.entries)}")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]


def validate_cartan(entries: Sequence[Sequence[int]]) -> None:
    n = len(entries)
    if n == 0:
        raise InvalidCartanMatrix("matrice de Cartan vide")
    if n > AFFVIR_MAX_RANK:
        raise UnsupportedRank(f"rang {n} > AFFVIR_MAX_RANK={AFFVIR_MAX_RANK}")
    if any(len(row) != n for row in entries):
        raise InvalidCartanMatrix("matrice de Cartan non carrée")
    for i in range(n):
        if entries[i][i] != 2:
            raise InvalidCartanMatrix(f"A[{i}][{i}] = {entries[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if entries[i][j] > 0:
                raise InvalidCartanMatrix(f"A[{i}][{j}] = {entries[i][j]} > 0")
            if (entries[i][j] == 0) != (entries[j][i] == 0):
                raise InvalidCartanMatrix(f"A[{i}][{j}] et A[{j}][{i}] : zéros non symétriques")
    # g simple <=> diagramme de Dynkin connexe
    seen, todo = {0}, deque([0])
    while todo:
        i = todo.popleft()
        for j in range(n):
            if entries[i][j] != 0 and j not in seen:
                seen.add(j)
                todo.append(j)
    if len(seen) != n:
        raise InvalidCartanMatrix("diagramme de Dynkin non connexe (algèbre non simple)")


def _path(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def _link(a: list[list[int]], i: int, j: int) -> None:
    a[i][j] = a[j][i] = -1


def cartan_matrix(name: str) -> CartanMatrix:
    """Matrice de Cartan d'un type fini nommé "A1", "B3", "G2", ..."""
    match = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", name)
    if not match:
        raise InvalidCartanMatrix(f"type de Cartan illisible: {name!r}")
    letter, n = match.group(1).upper(), int(match.group(2))
    if n > AFFVIR_MAX_RANK:
        raise UnsupportedRank(f"rang {n} > AFFVIR_MAX_RANK={AFFVIR_MAX_RANK}")
    if letter == "A" and n >= 1:
        a = _path(n)
    elif letter == "B" and n >= 2:
        a = _path(n)
        a[n - 1][n - 2] = -2  # α_n courte
    elif letter == "C" and n >= 2:
        a = _path(n)
        a[n - 2][n - 1] = -2  # α_n longue
    elif letter == "D" and n >= 4:
        a = _path(n - 1) + [[0] * (n - 1)]
        for row in a:
            row.append(0)
        a[n - 1][n - 1] = 2
        _link(a, n - 3, n - 1)
    elif letter == "E" and n in (6, 7, 8):
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j in [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]:
            _link(a, i, j)
    elif letter == "F" and n == 4:
        a = _path(4)
        a[2][1] = -2  # α_3, α_4 courtes
    elif letter == "G" and n == 2:
        a = [[2, -3], [-1, 2]]  # α_1 courte
    else:
        raise InvalidCartanMatrix(f"type {letter}{n} inconnu ou hors des types finis")
    return CartanMatrix(n, tuple(tuple(row) for row in a), name=f"{letter}{n}")


def parse_cartan_text(text: str) -> CartanMatrix:
    """Format fichier: première ligne le rang, puis `rang` lignes d'entiers."""
    lines = [line.split("#")[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    try:
        n = int(lines[0])
        rows = tuple(tuple(int(x) for x in line.replace(",", " ").split()) for line in lines[1:1 + n])
    except (IndexError, ValueError) as e:
        raise InvalidCartanMatrix(f"fichier de Cartan illisible: {e}") from e
    if len(rows) != n:
        raise InvalidCartanMatrix(f"{len(rows)} lignes lues, {n} attendues")
    return CartanMatrix(n, rows)


def load_cartan_file(path: str | Path) -> CartanMatrix:
    return parse_cartan_text(Path(path).read_text())


# ============================================================
# SYSTÈME DE RACINES
# ============================================================

def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


def _is_positive(a: Root) -> bool:
    return any(a) and all(x >= 0 for x in a)


@dataclass(frozen=True)
class RootSystem:
    cartan: CartanMatrix
    positive_roots: tuple[Root, ...]
    half_norms: tuple[Fraction, ...]  # (α_i, α_i)/2, racines courtes à 1

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def roots(self) -> frozenset[Root]:
        """Φ tout entier (positives et négatives)."""
        return frozenset(self.positive_roots) | frozenset(_neg(r) for r in self.positive_roots)

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def height(self, r: Root) -> int:
        return sum(r)

    def pairing(self, beta: Root, i: int) -> int:
        """⟨β, α_i∨⟩."""
        return sum(c * self.cartan[i, j] for j, c in enumerate(beta))

    def inner(self, a: Root, b: Root) -> Fraction:
        """Forme symétrisée (α_i, α_j) = d_i A_ij, racines courtes de norme 2."""
        total = Fraction(0)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        total += x * y * self.half_norms[i] * self.cartan[i, j]
        return total

    def coroot(self, r: Root) -> dict[int, int]:
        """Coordonnées de α∨ dans la base des α_i∨."""
        half = self.inner(r, r) / 2
        out = {}
        for i, c in enumerate(r):
            x = Fraction(c) * self.half_norms[i] / half
            if x:
                if x.denominator != 1:
                    raise InvalidCartanMatrix(f"coracine non entière pour {r}")
                out[i] = x.numerator
        return out

    def string_below(self, beta: Root, alpha: Root) -> int:
        """p = max{k : β − kα ∈ Φ}."""
        p, x = 0, _sub(beta, alpha)
        while x in self.roots:
            p += 1
            x = _sub(x, alpha)
        return p


def _symmetrizer(cartan: CartanMatrix) -> tuple[Fraction, ...]:
    n = cartan.rank
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    todo = deque([0])
    while todo:
        i = todo.popleft()
        for j in range(n):
            if j != i and cartan[i, j] != 0 and d[j] is None:
                d[j] = d[i] * cartan[i, j] / cartan[j, i]
                todo.append(j)
    for i in range(n):
        for j in range(n):
            if d[i] * cartan[i, j] != d[j] * cartan[j, i]:
                raise InvalidCartanMatrix("matrice de Cartan non symétrisable")
    low = min(d)
    return tuple(x / low for x in d)


def roots_from_cartan(cartan: CartanMatrix) -> RootSystem:
    """
    Racines positives par extension hauteur par hauteur des α_i-chaînes:
    β + α_i ∈ Φ ssi q > 0 où q = p − ⟨β, α_i∨⟩. Au-delà de la hauteur maximale
    théorique d'un type fini, la matrice est rejetée.
    """
    n = cartan.rank
    max_height = max(29, 2 * n)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found: set[Root] = set(simple)
    layers = [sorted(simple, reverse=True)]
    while layers[-1]:
        nxt: set[Root] = set()
        for beta in layers[-1]:
            for i, alpha in enumerate(simple):
                p, x = 0, _sub(beta, alpha)
                while x in found:
                    p += 1
                    x = _sub(x, alpha)
                q = p - sum(c * cartan[i, j] for j, c in enumerate(beta))
                if q > 0:
                    nxt.add(_add(beta, alpha))
        if nxt and len(layers) + 1 > max_height:
            raise InvalidCartanMatrix(
                f"fermeture des racines sans fin (hauteur > {max_height}): type non fini")
        found |= nxt
        layers.append(sorted(nxt, reverse=True))
    positive = tuple(r for layer in layers for r in layer)
    system = RootSystem(cartan, positive, _symmetrizer(cartan))
    logger.debug(f"{cartan.name}: {len(positive)} racines positives")
    return system


# ============================================================
# BASE DE CHEVALLEY
# ============================================================

@dataclass(frozen=True)
class ChevalleyBasis:
    roots: RootSystem
    labels: tuple[str, ...]
    weights: tuple[Root, ...]
    structure_table: Mapping[tuple[int, int], GElement] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.roots.rank

    @property
    def name(self) -> str:
        return self.roots.cartan.name

    def e(self, r: Root) -> int:
        return self.roots.positive_roots.index(r)

    def f(self, r: Root) -> int:
        return len(self.roots.positive_roots) + self.roots.positive_roots.index(r)

    def h(self, i: int) -> int:
        return 2 * len(self.roots.positive_roots) + i

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def bracket(self, i: int, j: int) -> GElement:
        return self.structure_table.get((i, j), {})

    def bracket_elements(self, x: Mapping[int, Rational], y: Mapping[int, Rational]) -> GElement:
        out: dict[int, Rational] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: as_rational(v) for k, v in out.items() if v != 0}

    def adjoint_matrix(self, i: int) -> SparseMatrix:
        """ad(x_i) : colonne j = [x_i, x_j]."""
        entries = {(k, j): c for j in range(self.dim) for k, c in self.bracket(i, j).items()}
        return SparseMatrix(self.dim, self.dim, entries)

    def jacobi_violations(self, triples: Iterable[tuple[int, int, int]] | None = None) -> list[tuple[int, int, int]]:
        if triples is None:
            triples = ((a, b, c) for a in range(self.dim)
                       for b in range(a + 1, self.dim) for c in range(b + 1, self.dim))
        bad = []
        for a, b, c in triples:
            total: dict[int, Rational] = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in self.bracket_elements(self.bracket(x, y), {z: 1}).items():
                    total[k] = total.get(k, 0) + v
            if any(v != 0 for v in total.values()):
                bad.append((a, b, c))
        return bad


def _root_label(prefix: str, r: Root) -> str:
    return f"{prefix}[{','.join(str(abs(x)) for x in r)}]"


class _StructureConstants:
    """N_{r,s} pour r, s, r+s ∈ Φ, à partir des paires spéciales positives."""

    def __init__(self, system: RootSystem):
        self.system = system
        self.special: dict[tuple[Root, Root], int] = {}
        order = {r: k for k, r in enumerate(system.positive_roots)}
        for xi in system.positive_roots:
            pairs = [(a, _sub(xi, a)) for a in system.positive_roots
                     if _sub(xi, a) in order and order[a] < order[_sub(xi, a)]]
            if not pairs:
                continue
            a0, b0 = min(pairs, key=lambda ab: order[ab[0]])
            self._set(a0, b0, system.string_below(b0, a0) + 1)
            for a, b in pairs:
                if (a, b) != (a0, b0):
                    self._set(a, b, self._from_jacobi(a, b, a0, b0))

    def _set(self, a: Root, b: Root, value: int) -> None:
        expected = self.system.string_below(b, a) + 1
        if abs(value) != expected:
            raise RuntimeError(f"|N({a},{b})| = {abs(value)} != p+1 = {expected}")
        self.special[(a, b)] = value
        self.special[(b, a)] = -value

    def _mixed(self, a: Root, b: Root) -> Fraction:
        """N_{a,−b} pour a, b > 0, relation N_{ξη}/(ζ,ζ) = N_{ηζ}/(ξ,ξ) si ξ+η+ζ = 0."""
        s = self.system
        g = _sub(a, b)
        if _is_positive(g):
            return -s.inner(g, g) / s.inner(a, a) * self.special[(b, g)]
        g = _neg(g)
        return s.inner(g, g) / s.inner(b, b) * self.special[(g, a)]

    def __call__(self, r: Root, s: Root) -> Fraction:
        rp, sp = _is_positive(r), _is_positive(s)
        if rp and sp:
            return Fraction(self.special[(r, s)])
        if not rp and not sp:
            return -self(_neg(r), _neg(s))
        if rp:
            return self._mixed(r, _neg(s))
        return -self(s, r)

    def _from_jacobi(self, a: Root, b: Root, a0: Root, b0: Root) -> int:
        # Jacobi sur (e_a, e_b, e_{-b0}), coefficient de e_{a0}
        roots = self.system.roots
        xi = _add(a, b)
        rest = Fraction(0)
        delta = _sub(b, b0)
        if delta in roots:
            rest += self(b, _neg(b0)) * self(delta, a)
        eps = _sub(a, b0)
        if eps in roots:
            rest += self(_neg(b0), a) * self(eps, b)
        value = -rest / self(xi, _neg(b0))
        if value.denominator != 1:
            raise RuntimeError(f"N({a},{b}) non entier: {value}")
        return value.numerator


def chevalley_structure_constants(system: RootSystem) -> ChevalleyBasis:
    pos = system.positive_roots
    npos, r = len(pos), system.rank
    weights = list(pos) + [_neg(a) for a in pos] + [(0,) * r] * r
    labels = ([_root_label("e", a) for a in pos] + [_root_label("f", a) for a in pos]
              + [f"h{i + 1}" for i in range(r)])
    root_index = {w: k for k, w in enumerate(weights[:2 * npos])}
    n_const = _StructureConstants(system)

    table: dict[tuple[int, int], GElement] = {}
    dim = len(labels)
    for i in range(dim):
        for j in range(dim):
            wi, wj = weights[i], weights[j]
            out: GElement = {}
            if i >= 2 * npos and j >= 2 * npos:
                pass
            elif i >= 2 * npos:
                c = system.pairing(wj, i - 2 * npos)
                if c:
                    out = {j: c}
            elif j >= 2 * npos:
                c = system.pairing(wi, j - 2 * npos)
                if c:
                    out = {i: -c}
            elif _add(wi, wj) == (0,) * r:
                sign = 1 if _is_positive(wi) else -1
                coroot = system.coroot(wi if sign > 0 else wj)
                out = {2 * npos + k: sign * c for k, c in coroot.items()}
            else:
                w = _add(wi, wj)
                if w in root_index:
                    c = n_const(wi, wj)
                    if c.denominator != 1:
                        raise RuntimeError(f"constante non entière N({wi},{wj}) = {c}")
                    out = {root_index[w]: c.numerator}
            if out:
                table[(i, j)] = out
    logger.info(f"{system.cartan.name}: base de Chevalley de dimension {dim}")
    return ChevalleyBasis(system, tuple(labels), tuple(weights), table)


# ============================================================
# FORME DE KILLING
# ============================================================

@dataclass(frozen=True)
class KillingForm:
    matrix: tuple[tuple[Rational, ...], ...]
    normalized_form: bool = False

    def __call__(self, i: int, j: int) -> Rational:
        return self.matrix[i][j]

    def value(self, x: Mapping[int, Rational], y: Mapping[int, Rational]) -> Rational:
        return as_rational(sum(a * b * self.matrix[i][j] for i, a in x.items() for j, b in y.items()))

    def as_sparse(self) -> SparseMatrix:
        return SparseMatrix.from_dense(self.matrix)

    def determinant(self) -> Rational:
        return determinant(self.as_sparse())

    def rank(self) -> int:
        return rank(self.as_sparse())


def killing_form(g: ChevalleyBasis) -> KillingForm:
    """κ(x, y) = tr(ad x ∘ ad y), exact, depuis la table de structure."""
    dim = g.dim
    zero = (0,) * g.rank
    m = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            if _add(g.weights[i], g.weights[j]) != zero:
                continue
            trace = 0
            for k in range(dim):
                for l, c in g.bracket(j, k).items():
                    trace += c * g.bracket(i, l).get(k, 0)
            m[i][j] = m[j][i] = as_rational(trace)
    return KillingForm(tuple(tuple(row) for row in m))


def normalized_form(g: ChevalleyBasis, kappa: KillingForm) -> KillingForm:
    """Forme invariante normalisée par (θ, θ) = 2, i.e. κ/(2h∨)."""
    theta = g.roots.highest_root
    h_theta = g.bracket(g.e(theta), g.f(theta))
    scale = Fraction(2) / kappa.value(h_theta, h_theta)
    return KillingForm(tuple(tuple(as_rational(x * scale) for x in row) for row in kappa.matrix),
                       normalized_form=True)


def dual_coxeter_number(g: ChevalleyBasis, kappa: KillingForm) -> int:
    theta = g.roots.highest_root
    h_theta = g.bracket(g.e(theta), g.f(theta))
    return as_rational(Fraction(kappa.value(h_theta, h_theta)) / 4)


# ============================================================
# CONSTRUCTION COMPLÈTE
# ============================================================

@dataclass(frozen=True)
class SimpleLieAlgebra:
    """g avec sa base de Chevalley et la forme bilinéaire utilisée dans L(g)."""
    basis: ChevalleyBasis
    killing: KillingForm
    form: KillingForm

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def name(self) -> str:
        return self.basis.name


def build_simple_lie(cartan: CartanMatrix | str, normalize: bool = False) -> SimpleLieAlgebra:
    if isinstance(cartan, str):
        cartan = cartan_matrix(cartan)
    basis = chevalley_structure_constants(roots_from_cartan(cartan))
    kappa = killing_form(basis)
    form = normalized_form(basis, kappa) if normalize else kappa
    return SimpleLieAlgebra(basis, kappa, form)
