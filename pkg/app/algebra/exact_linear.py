"""
Algèbre linéaire exacte sur Q.

Le corps de base est Q et non C : toutes les constantes de structure de L(g)
(y compris (m³−m)/12 et la forme de Killing) sont rationnelles, un système
linéaire à coefficients rationnels admet une base de solutions rationnelle, et
la dimension d'un espace de solutions est la même sur Q et sur C. Aucune
arithmétique flottante n'intervient : tolérance zéro partout.

Contenu:
- SparseMatrix : matrice creuse immuable (dict (ligne, colonne) -> coefficient)
- rref / kernel_basis : élimination de Gauss-Jordan, forme échelonnée réduite
- RowReducer : la même forme réduite construite ligne par ligne (les solveurs
  génèrent des millions d'équations, pour la plupart redondantes)
- Subspace : base canonique (échelonnée réduite), égalité structurelle
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from app.errors import DimensionMismatch

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
Vector = dict[int, Rational]
CanonicalVector = tuple[tuple[int, Rational], ...]


# ============================================================
# SCALAIRES
# ============================================================

def as_rational(x) -> Rational:
    """Entier Python quand c'est possible, Fraction sinon (arithmétique plus rapide)."""
    if type(x) is int:
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def format_rational(x: Rational) -> str:
    """Représentation texte "p" ou "p/q" (jamais de flottant)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Rational:
    return as_rational(Fraction(text.strip()))


def _bit_size(x: Rational) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


def _axpy(target: dict, factor: Rational, source: Mapping[int, Rational],
          owner=None, index: dict | None = None, skip: int | None = None) -> None:
    """target += factor * source, en place ; maintient l'index colonne -> lignes."""
    for col, value in source.items():
        new = target.get(col, 0) + factor * value
        if type(new) is Fraction and new.denominator == 1:
            new = new.numerator
        if new == 0:
            if col in target:
                del target[col]
                if index is not None and col != skip:
                    index[col].discard(owner)
        else:
            if index is not None and col not in target and col != skip:
                index[col].add(owner)
            target[col] = new


def _normalize(row: dict) -> int:
    """Rend le coefficient de tête égal à 1 ; renvoie la colonne pivot."""
    pivot = min(row)
    lead = row[pivot]
    if lead != 1:
        inv = Fraction(1) / lead
        for col in row:
            row[col] = as_rational(row[col] * inv)
    return pivot


# ============================================================
# MATRICES CREUSES
# ============================================================

@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Rational]

    def __post_init__(self):
        clean = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionMismatch(f"entrée ({i}, {j}) hors d'une matrice {self.rows}x{self.cols}")
            value = as_rational(value)
            if value != 0:
                clean[(i, j)] = value
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, Rational]], cols: int) -> "SparseMatrix":
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in row.items()}
        return cls(len(rows), cols, entries)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        cols = len(data[0]) if data else 0
        entries = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row)}
        return cls(len(data), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def row_dicts(self) -> list[Vector]:
        out: list[Vector] = [{} for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def to_dense(self) -> list[list[Rational]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def matvec(self, v: Mapping[int, Rational]) -> Vector:
        out: Vector = {}
        for (i, j), value in self.entries.items():
            x = v.get(j, 0)
            if x:
                out[i] = out.get(i, 0) + value * x
        return {i: as_rational(x) for i, x in out.items() if x != 0}


def _gauss_jordan(rows: Sequence[Mapping[int, Rational]]) -> list[Vector]:
    """
    Forme échelonnée réduite, balayage colonne par colonne.

    Pivot: dans la colonne courante, l'entrée de plus petite taille binaire
    (numérateur + dénominateur), à égalité la ligne d'indice le plus bas.
    """
    work: dict[int, dict] = {}
    index: dict[int, set] = defaultdict(set)
    for i, row in enumerate(rows):
        clean = {c: as_rational(v) for c, v in row.items() if v != 0}
        if clean:
            work[i] = clean
            for c in clean:
                index[c].add(i)

    pivot_of: dict[int, int] = {}
    used: set[int] = set()
    for col in sorted(index):
        candidates = [i for i in index[col] if i not in used]
        if not candidates:
            continue
        p = min(candidates, key=lambda i: (_bit_size(work[i][col]), i))
        prow = work[p]
        lead = prow[col]
        if lead != 1:
            inv = Fraction(1) / lead
            for c in prow:
                prow[c] = as_rational(prow[c] * inv)
        pivot_of[col] = p
        used.add(p)
        for i in sorted(index[col]):
            if i != p:
                _axpy(work[i], -work[i][col], prow, owner=i, index=index)
    return [work[pivot_of[c]] for c in sorted(pivot_of)]


def rref(m: SparseMatrix) -> tuple[int, SparseMatrix]:
    """Rang et forme échelonnée réduite (lignes nulles en bas)."""
    reduced = _gauss_jordan(m.row_dicts())
    return len(reduced), SparseMatrix.from_rows(reduced + [{}] * (m.rows - len(reduced)), m.cols)


def rank(m: SparseMatrix) -> int:
    return len(_gauss_jordan(m.row_dicts()))


def _kernel_vectors(reduced: Iterable[Mapping[int, Rational]], ncols: int) -> list[Vector]:
    by_pivot = {min(row): row for row in reduced}
    free_hits: dict[int, list[int]] = defaultdict(list)
    for p, row in by_pivot.items():
        for c in row:
            if c != p:
                free_hits[c].append(p)
    vectors = []
    for f in range(ncols):
        if f in by_pivot:
            continue
        v: Vector = {f: 1}
        for p in free_hits.get(f, ()):
            v[p] = -by_pivot[p][f]
        vectors.append(v)
    return vectors


def kernel_basis(m: SparseMatrix) -> "Subspace":
    """Noyau de m : dim = cols − rang(m), base canonique."""
    reduced = _gauss_jordan(m.row_dicts())
    return Subspace.span(m.cols, _kernel_vectors(reduced, m.cols))


def determinant(m: SparseMatrix) -> Rational:
    if m.rows != m.cols:
        raise DimensionMismatch("déterminant d'une matrice non carrée")
    a = [[Fraction(x) for x in row] for row in m.to_dense()]
    n, det = m.rows, Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return as_rational(det)


# ============================================================
# RÉDUCTION INCRÉMENTALE
# ============================================================

class RowReducer:
    """
    Forme échelonnée réduite maintenue équation par équation.

    Invariant: chaque ligne stockée a 1 sur sa colonne pivot (sa colonne la plus
    petite) et 0 sur toutes les autres colonnes pivots. Une équation redondante
    se réduit à zéro et n'est pas stockée, la mémoire reste bornée par le rang.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.equations = 0
        self._rows: dict[int, dict] = {}
        self._hits: dict[int, set] = defaultdict(set)  # colonne libre -> pivots

    @property
    def rank(self) -> int:
        return len(self._rows)

    def add(self, row: Mapping[int, Rational]) -> bool:
        """Ajoute une équation ; True si elle augmente le rang."""
        self.equations += 1
        r = {c: v for c, v in row.items() if v != 0}
        for c in [c for c in r if c in self._rows]:
            v = r.get(c, 0)
            if v:
                _axpy(r, -v, self._rows[c])
        if not r:
            return False
        if max(r) >= self.ncols or min(r) < 0:
            raise DimensionMismatch(f"colonne hors de [0, {self.ncols})")
        p = _normalize(r)
        for q in sorted(self._hits.pop(p, ())):
            prow = self._rows[q]
            _axpy(prow, -prow[p], r, owner=q, index=self._hits, skip=q)
        self._rows[p] = r
        for c in r:
            if c != p:
                self._hits[c].add(p)
        return True

    def extend(self, rows: Iterable[Mapping[int, Rational]]) -> None:
        for row in rows:
            self.add(row)

    def reduced_rows(self) -> list[Vector]:
        return [dict(self._rows[p]) for p in sorted(self._rows)]

    def kernel(self) -> "Subspace":
        return Subspace.span(self.ncols, _kernel_vectors(self._rows.values(), self.ncols))


# ============================================================
# SOUS-ESPACES
# ============================================================

@dataclass(frozen=True)
class Subspace:
    """
    Sous-espace de Q^ambient_dim, stocké par sa base échelonnée réduite.

    La base réduite est unique : deux sous-espaces sont égaux si et seulement
    si leurs bases stockées coïncident entrée par entrée.
    """
    ambient_dim: int
    basis: tuple[CanonicalVector, ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Mapping[int, Rational]]) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            for c in v:
                if not 0 <= c < ambient_dim:
                    raise DimensionMismatch(f"coordonnée {c} hors de [0, {ambient_dim})")
        reduced = _gauss_jordan(vectors)
        return cls(ambient_dim, tuple(tuple(sorted(row.items())) for row in reduced))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(((i, 1),) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[Vector]:
        return [dict(v) for v in self.basis]

    def basis_matrix(self) -> SparseMatrix:
        return SparseMatrix.from_rows(self.vectors(), self.ambient_dim)

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"dimensions ambiantes {self.ambient_dim} != {other.ambient_dim}")

    def residual(self, v: Mapping[int, Rational]) -> Vector:
        r = {c: as_rational(x) for c, x in v.items() if x != 0}
        for vec in self.basis:
            pivot = vec[0][0]
            x = r.get(pivot, 0)
            if x:
                _axpy(r, -x, dict(vec))
        return r

    def contains(self, v: Mapping[int, Rational]) -> bool:
        for c in v:
            if not 0 <= c < self.ambient_dim:
                raise DimensionMismatch(f"coordonnée {c} hors de [0, {self.ambient_dim})")
        return not self.residual(v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(dict(v)) for v in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.ambient_dim, self.vectors() + other.vectors())

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        k = self.dim
        rows: dict[int, Vector] = defaultdict(dict)
        for i, vec in enumerate(self.basis):
            for c, x in vec:
                rows[c][i] = x
        for j, vec in enumerate(other.basis):
            for c, x in vec:
                rows[c][k + j] = -x
        null = kernel_basis(SparseMatrix.from_rows(list(rows.values()), k + other.dim))
        combos = []
        for coeffs in null.vectors():
            v: Vector = {}
            for i, x in coeffs.items():
                if i < k:
                    _axpy(v, x, dict(self.basis[i]))
            combos.append(v)
        return Subspace.span(self.ambient_dim, combos)

    def project(self, keep: Callable[[int], bool] | Iterable[int]) -> "Subspace":
        """Annule les coordonnées hors de `keep`, puis recanonicalise."""
        if not callable(keep):
            allowed = set(keep)
            keep = allowed.__contains__
        return Subspace.span(self.ambient_dim,
                             [{c: x for c, x in vec if keep(c)} for vec in self.basis])

    def embed(self, ambient_dim: int, mapping: Callable[[Vector], Vector]) -> "Subspace":
        """Image par une application linéaire donnée vecteur par vecteur."""
        return Subspace.span(ambient_dim, [mapping(v) for v in self.vectors()])


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    a._check(b)
    return a.basis == b.basis


def subspace_contains(a: Subspace, v: Mapping[int, Rational]) -> bool:
    return a.contains(v)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b
