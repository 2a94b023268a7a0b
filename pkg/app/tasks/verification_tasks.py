"""
Tâches Celery de vérification: un problème de résolution par tâche.

Chaque tâche reçoit la donnée de Cartan (nom de type "A1" ou matrice en listes
d'entiers), reconstruit l'algèbre (une fois par worker), résout et renvoie un
dict JSON. L'ordre du rapport est fixé côté CLI, pas par l'ordonnancement.
"""
import logging
import time
from dataclasses import asdict
from functools import lru_cache
from typing import Sequence, Union

from celery import shared_task

from app.algebra.affine_virasoro import AffineVirasoro, Selector, TruncationWindow
from app.algebra.simple_lie import CartanMatrix, build_simple_lie
from app.config import AFFVIR_NORMALIZE_FORM
from app.solvers import biderivations, derivations, postlie
from app.solvers.biderivations import BiderivationProblem, Symmetry
from app.solvers.derivations import DerivationProblem

logger = logging.getLogger(__name__)

CartanSpec = Union[str, Sequence[Sequence[int]]]

# ============================================================
# ALGÈBRE (lazy init, une fois par worker)
# ============================================================


def _key(cartan: CartanSpec) -> Union[str, tuple[tuple[int, ...], ...]]:
    if isinstance(cartan, str):
        return cartan.strip().upper()
    return tuple(tuple(int(x) for x in row) for row in cartan)


@lru_cache(maxsize=16)
def _build(key, normalize: bool) -> AffineVirasoro:
    if isinstance(key, str):
        g = build_simple_lie(key, normalize)
    else:
        g = build_simple_lie(CartanMatrix(len(key), key), normalize)
    logger.info(f"[Algèbre] {g.name}: dim g = {g.dim}")
    return AffineVirasoro(g)


def get_algebra(cartan: CartanSpec, normalize: bool = AFFVIR_NORMALIZE_FORM) -> AffineVirasoro:
    """L(g) partagée entre les tâches du même process (caches de solveurs inclus)."""
    return _build(_key(cartan), normalize)


def _timed(label: str, fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    logger.info(f"[Task] {label} en {time.perf_counter() - start:.2f}s")
    return result


# ============================================================
# DÉRIVATIONS
# ============================================================

@shared_task(bind=True, acks_late=True)
def derivation_row(self, cartan: CartanSpec, domain: str, target: str, N: int, n: int,
                   margin: int | None = None, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    p = DerivationProblem(Selector(domain), Selector(target), N, n, margin)
    return asdict(_timed(f"Der {domain}->{target} N={N} n={n}", derivations.summarize, L, p))


@shared_task(bind=True, acks_late=True)
def nonzero_degree_row(self, cartan: CartanSpec, N: int, n: int, margin: int | None = None,
                       normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    [row] = _timed(f"Der full->gtilde N={N} n={n}", derivations.nonzero_degree_report, L, N, (n,), margin)
    return asdict(row)


@shared_task(bind=True, acks_late=True)
def degree_zero_cohomology(self, cartan: CartanSpec, m: int, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    return {"m": m, "ok": derivations.degree_zero_cohomology_vanishes(L, m)}


@shared_task(bind=True, acks_late=True)
def degree_zero_homs(self, cartan: CartanSpec, m: int, n: int, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    return {"m": m, "n": n, "dim": derivations.degree_zero_hom_space(L, m, n).dim}


@shared_task(bind=True, acks_late=True)
def gamma_gap(self, cartan: CartanSpec, N: int, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    gap = _timed(f"gamma N={N}", derivations.gamma_gap_check, L, N)
    return {**asdict(gap), "ok": gap.ok}


@shared_task(bind=True, acks_late=True)
def quotient_endomorphisms(self, cartan: CartanSpec, N: int, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    space = derivations.module_endomorphisms(L, TruncationWindow(N), Selector.QUOTIENT)
    return {"N": N, "dim": space.dim}


@shared_task(bind=True, acks_late=True)
def dense_derivations(self, cartan: CartanSpec, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    graded = derivations.derivation_space(L, DerivationProblem(Selector.SIMPLE, Selector.SIMPLE, 1, 0))
    dense = derivations.dense_derivation_space(L)
    return {"dim_graded": graded.dim, "dim_dense": dense.dim, "equal": graded.basis == dense.basis}


# ============================================================
# BIDÉRIVATIONS
# ============================================================

@shared_task(bind=True, acks_late=True)
def biderivation_row(self, cartan: CartanSpec, selector: str, N: int, n: int, symmetry: str,
                     margin: int | None = None, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    p = BiderivationProblem(Selector(selector), N, n, Symmetry(symmetry), margin)
    row = asdict(_timed(f"Bider {selector} {symmetry} N={N} n={n}", biderivations.summarize, L, p))
    if p.symmetry is Symmetry.SKEW and n == 0:
        system = biderivations.biderivation_system(L, p)
        row["factorises"] = all(biderivations.bracket_factorisation_check(system.to_map(v), p.M)
                                for v in biderivations.biderivation_space(L, p).vectors())
    return row


@shared_task(bind=True, acks_late=True)
def quotient_row(self, cartan: CartanSpec, N: int, n: int, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    return asdict(biderivations.quotient_comparison(L, N, (n,))[0])


@shared_task(bind=True, acks_late=True)
def decomposition(self, cartan: CartanSpec, selector: str, N: int, n: int,
                  normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    report = biderivations.decomposition_check(L, Selector(selector), N, n)
    return {**asdict(report), "ok": report.ok}


@shared_task(bind=True, acks_late=True)
def semisimple_base(self, cartan: CartanSpec, normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    report = biderivations.semisimple_base_checks(L.g.basis)
    return {"algebra": report.algebra, "dims": dict(report.dims), "ok": report.ok}


@shared_task(bind=True, acks_late=True)
def biderivation_oracle(self, cartan: CartanSpec, N: int, degrees: list[int],
                        normalize: bool = AFFVIR_NORMALIZE_FORM) -> list[dict]:
    L = get_algebra(cartan, normalize)
    rows = _timed(f"oracle dense N={N}", biderivations.oracle_comparison,
                  L, TruncationWindow(N), Selector.FULL, degrees)
    return [asdict(r) for r in rows]


# ============================================================
# POST-LIE
# ============================================================

@shared_task(bind=True, acks_late=True)
def postlie_row(self, cartan: CartanSpec, selector: str, N: int, n: int,
                normalize: bool = AFFVIR_NORMALIZE_FORM) -> dict:
    L = get_algebra(cartan, normalize)
    return asdict(postlie.postlie_triviality_report(L, N, (n,), Selector(selector))[0])
