"""
L'algèbre affine-Virasoro L(g) = g⊗C[t^{±1}] ⊕ CK₁ ⊕ CK₂ ⊕ ⊕_m Cd_m.

Crochets:
    [x⊗t^m, y⊗t^n] = [x,y]⊗t^{m+n} + m(x,y)δ_{m+n,0} K₁
    [L(g), K₁] = [L(g), K₂] = 0
    [d_m, x⊗t^n]   = n x⊗t^{m+n}
    [d_m, d_n]     = (n−m) d_{m+n} + δ_{m+n,0} (m³−m)/12 K₂

Graduation: L_n = g⊗t^n ⊕ Cd_n (n ≠ 0), L_0 = g ⊕ span{d_0, K₁, K₂}.

Troncature: on garde les degrés −N..N et tout terme de degré hors fenêtre est
projeté (supprimé). Les vérifications n'imposent une identité que sur les
combinaisons dont tous les degrés intermédiaires restent dans la fenêtre.

Le quotient L(g)/Z est réalisé structurellement: K₁, K₂ retirés de la base et
termes centraux retirés du crochet.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Mapping, NamedTuple, Union

from app.algebra.exact_linear import Rational, SparseMatrix, Subspace, as_rational, format_rational, kernel_basis
from app.algebra.simple_lie import SimpleLieAlgebra
from app.errors import WindowError

logger = logging.getLogger(__name__)


# ============================================================
# INDICES DE BASE
# ============================================================

class Loop(NamedTuple):
    """x_gid ⊗ t^power."""
    gid: int
    power: int


class D(NamedTuple):
    """Générateur de Virasoro d_m."""
    m: int


class Central(str, Enum):
    K1 = "K1"
    K2 = "K2"


K1 = Central.K1
K2 = Central.K2

BasisIndex = Union[Loop, D, Central]
Element = dict  # BasisIndex -> Rational, jamais de coefficient nul


def degree(i: BasisIndex) -> int:
    if isinstance(i, Loop):
        return i.power
    if isinstance(i, D):
        return i.m
    return 0


class Selector(str, Enum):
    FULL = "full"          # L(g)
    GTILDE = "gtilde"      # ĝ ⊕ CK₁
    GHAT = "ghat"          # algèbre de lacets
    VIR = "vir"            # span{d_m} ⊕ CK₂
    QUOTIENT = "quotient"  # L(g)/Z
    SIMPLE = "simple"      # g seule

    @property
    def has_loops(self) -> bool:
        return self is not Selector.VIR

    @property
    def has_d(self) -> bool:
        return self in (Selector.FULL, Selector.VIR, Selector.QUOTIENT)

    @property
    def has_k1(self) -> bool:
        return self in (Selector.FULL, Selector.GTILDE)

    @property
    def has_k2(self) -> bool:
        return self in (Selector.FULL, Selector.VIR)


@dataclass(frozen=True)
class TruncationWindow:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise WindowError(f"fenêtre N={self.N} < 1")

    def contains(self, deg: int) -> bool:
        return -self.N <= deg <= self.N

    @property
    def degrees(self) -> range:
        return range(-self.N, self.N + 1)


def _sort_key(i: BasisIndex) -> tuple:
    if isinstance(i, Loop):
        return (i.power, 0, i.gid)
    if isinstance(i, D):
        return (i.m, 1, 0)
    return (0, 2, 0 if i is K1 else 1)


# ============================================================
# ALGÈBRE TRONQUÉE (tables indexées par entiers)
# ============================================================

@dataclass(frozen=True)
class TruncatedAlgebra:
    """Fenêtre de L(g) figée: base ordonnée, degrés, et table complète des crochets."""
    selector: Selector
    window: TruncationWindow
    basis: tuple[BasisIndex, ...]
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    table: Mapping[tuple[int, int], dict[int, Rational]] = field(repr=False)
    index: Mapping[BasisIndex, int] = field(repr=False)

    @property
    def N(self) -> int:
        return self.window.N

    @property
    def dim(self) -> int:
        return len(self.basis)

    def ad(self, i: int, j: int) -> dict[int, Rational]:
        return self.table.get((i, j), {})

    def in_window(self, *degs: int) -> bool:
        n = self.window.N
        return all(-n <= d <= n for d in degs)

    def of_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    def bracket_vec(self, x: Mapping[int, Rational], y: Mapping[int, Rational]) -> dict[int, Rational]:
        out: dict[int, Rational] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.ad(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: as_rational(v) for k, v in out.items() if v != 0}

    def indices_where(self, predicate) -> list[int]:
        return [i for i, b in enumerate(self.basis) if predicate(b)]


# ============================================================
# L(g)
# ============================================================

class AffineVirasoro:
    def __init__(self, g: SimpleLieAlgebra):
        self.g = g
        self._truncations: dict[tuple[int, Selector], TruncatedAlgebra] = {}

    # --------------------------------------------------------
    # base
    # --------------------------------------------------------

    @staticmethod
    def degree(i: BasisIndex) -> int:
        return degree(i)

    def label(self, i: BasisIndex) -> str:
        if isinstance(i, Loop):
            return f"{self.g.basis.labels[i.gid]}*t^{i.power}"
        if isinstance(i, D):
            return f"d_{i.m}"
        return i.value

    def in_basis(self, i: BasisIndex, w: TruncationWindow, s: Selector) -> bool:
        if isinstance(i, Loop):
            return (s.has_loops and 0 <= i.gid < self.g.dim and w.contains(i.power)
                    and (s is not Selector.SIMPLE or i.power == 0))
        if isinstance(i, D):
            return s.has_d and w.contains(i.m)
        if i is K1:
            return s.has_k1
        if i is K2:
            return s.has_k2
        return False

    def basis(self, w: TruncationWindow, s: Selector) -> tuple[BasisIndex, ...]:
        items: list[BasisIndex] = []
        powers = [0] if s is Selector.SIMPLE else list(w.degrees)
        if s.has_loops:
            items += [Loop(x, m) for m in powers for x in range(self.g.dim)]
        if s.has_d:
            items += [D(m) for m in w.degrees]
        if s.has_k1:
            items.append(K1)
        if s.has_k2:
            items.append(K2)
        return tuple(sorted(items, key=_sort_key))

    def graded_dims(self, w: TruncationWindow, s: Selector) -> dict[int, int]:
        dims = {d: 0 for d in w.degrees}
        for i in self.basis(w, s):
            dims[degree(i)] += 1
        return dims

    # --------------------------------------------------------
    # crochet
    # --------------------------------------------------------

    def _raw_bracket(self, a: BasisIndex, b: BasisIndex, s: Selector) -> Element:
        out: dict = {}
        if isinstance(a, Central) or isinstance(b, Central):
            return out
        if isinstance(a, Loop) and isinstance(b, Loop):
            m, n = a.power, b.power
            for k, c in self.g.basis.bracket(a.gid, b.gid).items():
                out[Loop(k, m + n)] = c
            if s.has_k1 and m + n == 0 and m != 0:
                c = m * self.g.form(a.gid, b.gid)
                if c:
                    out[K1] = c
        elif isinstance(a, D) and isinstance(b, Loop):
            if b.power:
                out[Loop(b.gid, a.m + b.power)] = b.power
        elif isinstance(a, Loop) and isinstance(b, D):
            if a.power:
                out[Loop(a.gid, b.m + a.power)] = -a.power
        else:
            m, n = a.m, b.m
            if n != m:
                out[D(m + n)] = n - m
            if s.has_k2 and m + n == 0:
                c = Fraction(m ** 3 - m, 12)
                if c:
                    out[K2] = c
        return {k: as_rational(v) for k, v in out.items() if v != 0}

    def bracket(self, a: BasisIndex, b: BasisIndex, w: TruncationWindow, s: Selector) -> Element:
        """Crochet exact projeté sur la fenêtre (termes hors fenêtre supprimés)."""
        for x in (a, b):
            if not self.in_basis(x, w, s):
                raise WindowError(f"{x!r} hors de la base ({s.value}, N={w.N})")
        return {k: v for k, v in self._raw_bracket(a, b, s).items() if w.contains(degree(k))}

    def bracket_elements(self, x: Mapping, y: Mapping, w: TruncationWindow, s: Selector) -> Element:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, c in self.bracket(a, b, w, s).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return {k: as_rational(v) for k, v in out.items() if v != 0}

    def format_element(self, x: Mapping) -> str:
        if not x:
            return "0"
        terms = sorted(x.items(), key=lambda kv: _sort_key(kv[0]))
        return " + ".join(f"{format_rational(c)}*{self.label(k)}" for k, c in terms)

    # --------------------------------------------------------
    # troncatures
    # --------------------------------------------------------

    def truncate(self, w: TruncationWindow, s: Selector) -> TruncatedAlgebra:
        key = (w.N, s)
        if key not in self._truncations:
            basis = self.basis(w, s)
            index = {b: k for k, b in enumerate(basis)}
            table: dict[tuple[int, int], dict[int, Rational]] = {}
            for i, j in combinations(range(len(basis)), 2):
                value = {index[k]: c for k, c in self.bracket(basis[i], basis[j], w, s).items()}
                if value:
                    table[(i, j)] = value
                    table[(j, i)] = {k: -c for k, c in value.items()}
            self._truncations[key] = TruncatedAlgebra(
                selector=s, window=w, basis=basis,
                labels=tuple(self.label(b) for b in basis),
                degrees=tuple(degree(b) for b in basis),
                table=table, index=index)
            logger.debug(f"{self.g.name} {s.value} N={w.N}: base de dimension {len(basis)}")
        return self._truncations[key]

    # --------------------------------------------------------
    # centre, Jacobi, contrôles
    # --------------------------------------------------------

    def center_degree0(self, w: TruncationWindow, s: Selector) -> Subspace:
        """
        Centre restreint au degré 0: noyau de v ↦ ad v sur la fenêtre. En degré
        extrême la projection rend des éléments faussement centraux, d'où la
        restriction (le centre de L(g) est de degré 0).
        """
        alg = self.truncate(w, s)
        zero = alg.of_degree(0)
        rows: dict[tuple[int, int], dict[int, Rational]] = {}
        for a in range(alg.dim):
            for col, z in enumerate(zero):
                for k, c in alg.ad(z, a).items():
                    rows.setdefault((a, k), {})[col] = c
        return kernel_basis(SparseMatrix.from_rows(list(rows.values()), len(zero)))

    def center_labels(self, w: TruncationWindow, s: Selector, center: Subspace) -> list[str]:
        alg = self.truncate(w, s)
        zero = alg.of_degree(0)
        out = []
        for vec in center.vectors():
            element = {alg.basis[zero[c]]: x for c, x in vec.items()}
            if len(element) == 1 and next(iter(element.values())) == 1:
                out.append(self.label(next(iter(element))))
            else:
                out.append(self.format_element(element))
        return out

    def jacobi_report(self, w: TruncationWindow, s: Selector) -> "JacobiReport":
        """
        [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 sur les triplets sûrs. Le jacobiateur
        d'un crochet antisymétrique est alterné: les triplets a < b < c suffisent
        (l'antisymétrie est contrôlée par antisymmetry_report).
        """
        alg = self.truncate(w, s)
        checked, bad = 0, []
        for a, b, c in combinations(range(alg.dim), 3):
            p, q, r = alg.degrees[a], alg.degrees[b], alg.degrees[c]
            if not alg.in_window(p + q, q + r, p + r, p + q + r):
                continue
            checked += 1
            total: dict[int, Rational] = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in alg.ad(x, y).items():
                    for l, u in alg.ad(k, z).items():
                        total[l] = total.get(l, 0) + v * u
            if any(v != 0 for v in total.values()):
                bad.append((alg.labels[a], alg.labels[b], alg.labels[c]))
        if bad:
            logger.warning(f"Jacobi: {len(bad)} violations ({s.value}, N={w.N})")
        return JacobiReport(checked, bad)

    def antisymmetry_report(self, w: TruncationWindow, s: Selector) -> list[tuple[str, str]]:
        basis = self.basis(w, s)
        bad = []
        for a, b in combinations(basis, 2):
            ab, ba = self.bracket(a, b, w, s), self.bracket(b, a, w, s)
            if ab != {k: -v for k, v in ba.items()}:
                bad.append((self.label(a), self.label(b)))
        return bad

    def degree_additivity_report(self, w: TruncationWindow, s: Selector) -> list[tuple[str, str]]:
        basis = self.basis(w, s)
        bad = []
        for a in basis:
            for b in basis:
                if any(degree(k) != degree(a) + degree(b) for k in self.bracket(a, b, w, s)):
                    bad.append((self.label(a), self.label(b)))
        return bad

    def ideal_report(self, w: TruncationWindow) -> list[tuple[str, str]]:
        """g̃ idéal de L(g): [x, y] ∈ g̃ pour x ∈ L(g), y ∈ g̃ (paires sûres)."""
        full = self.basis(w, Selector.FULL)
        gtilde = [b for b in full if self.in_basis(b, w, Selector.GTILDE)]
        bad = []
        for x in full:
            for y in gtilde:
                if not w.contains(degree(x) + degree(y)):
                    continue
                value = self.bracket(x, y, w, Selector.FULL)
                if any(not self.in_basis(k, w, Selector.GTILDE) for k in value):
                    bad.append((self.label(x), self.label(y)))
        return bad


@dataclass(frozen=True)
class JacobiReport:
    triples_checked: int
    violations: list[tuple[str, str, str]]

    @property
    def ok(self) -> bool:
        return not self.violations
