"""
Exécution d'une configuration: construit L(g), lance les problèmes (via
Celery, en eager par défaut) et assemble le rapport dans un ordre fixe
(tâche, sélecteur, degré, symétrie).
"""
import logging
import math
import random
from enum import Enum
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Optional, Union

from celery import Signature
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.algebra.affine_virasoro import AffineVirasoro, D, K1, K2, Loop, Selector, TruncationWindow
from app.algebra.exact_linear import format_rational
from app.algebra.simple_lie import dual_coxeter_number, load_cartan_file
from app.celery_app import celery  # noqa: F401  (enregistre la config eager avant les tâches)
from app.cli.reports import (AlgebraInfo, BiderivationRow, CenterReport, ClaimResult, DerivationRow, PostLieRow,
                             RunReport)
from app.config import (AFFVIR_DEFAULT_TYPE, AFFVIR_DEFAULT_WINDOW, AFFVIR_NORMALIZE_FORM, AFFVIR_SEED,
                        CELERY_RESULT_TIMEOUT)
from app.errors import ConfigError
from app.solvers.biderivations import Symmetry, inner_biderivation
from app.solvers.postlie import (BilinearProduct, corrupt, is_commutative_postlie, postlie_to_biderivation,
                                 random_bilinear_product)
from app.tasks import verification_tasks as vt

logger = logging.getLogger(__name__)

# Au-delà, les contrôles exhaustifs de g sont échantillonnés
EXHAUSTIVE_DIM = 80
SAMPLE_TRIPLES = 2000
# Oracle dense: dim(fenêtre)³ inconnues
ORACLE_MAX_UNKNOWNS = 20_000
SEMISIMPLE_MAX_DIM = 14

EXPECTED_CENTER = {
    Selector.FULL: ["K1", "K2"],
    Selector.GTILDE: ["K1"],
    Selector.VIR: ["K2"],
    Selector.GHAT: [],
    Selector.QUOTIENT: [],
    Selector.SIMPLE: [],
}


class Task(str, Enum):
    BUILD = "build"
    JACOBI = "jacobi"
    CENTER = "center"
    DERIVE = "derive"
    BIDER = "bider"
    POSTLIE = "postlie"
    LEMMAS = "lemmas"
    ALL = "all"


TASK_ORDER = (Task.BUILD, Task.JACOBI, Task.CENTER, Task.DERIVE, Task.LEMMAS, Task.BIDER, Task.POSTLIE)
SOLVER_TASKS = frozenset({Task.DERIVE, Task.BIDER, Task.POSTLIE, Task.ALL})


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    cartan_type: str = AFFVIR_DEFAULT_TYPE
    cartan_file: Optional[Path] = None
    window: int = Field(default=AFFVIR_DEFAULT_WINDOW, ge=1)
    degrees: Optional[tuple[int, ...]] = None
    task: Task = Task.ALL
    selector: Selector = Selector.FULL
    symmetry: Optional[Symmetry] = None
    format: OutputFormat = OutputFormat.TEXT
    seed: int = AFFVIR_SEED
    margin: Optional[int] = Field(default=None, ge=1)
    oracle: bool = False
    normalize_form: bool = AFFVIR_NORMALIZE_FORM

    @model_validator(mode="after")
    def _degrees_in_window(self) -> "RunConfig":
        if self.degrees is not None and self.task in SOLVER_TASKS:
            bound = self.window - 2
            bad = [d for d in self.degrees if abs(d) > bound]
            if bad:
                raise ValueError(f"degrés {bad} hors de [{-bound}, {bound}] pour N={self.window}")
        return self

    @property
    def solver_degrees(self) -> list[int]:
        if self.degrees is not None:
            return sorted(set(self.degrees))
        bound = self.window - 2
        return list(range(-bound, bound + 1))

    @property
    def bider_degrees(self) -> list[int]:
        """Biderivations: marge (N − |n|) // 3 ≥ 1."""
        return [n for n in self.solver_degrees if abs(n) <= self.window - 3]


def _gather(signatures: Iterable[Signature]) -> list:
    results = [sig.apply_async() for sig in signatures]
    return [r.get(timeout=CELERY_RESULT_TIMEOUT) for r in results]


def _witness(items: Iterable, limit: int = 3) -> list[str]:
    out = []
    for item in items:
        out.append(item if isinstance(item, str) else "(" + ", ".join(map(str, item)) + ")")
        if len(out) >= limit:
            break
    return out


class Runner:
    def __init__(self, config: RunConfig):
        self.config = config
        if config.cartan_file is not None:
            try:
                cartan = load_cartan_file(config.cartan_file)
            except OSError as e:
                raise ConfigError(f"fichier de Cartan illisible: {e}") from e
            self.cartan: Union[str, list[list[int]]] = [list(row) for row in cartan.entries]
            label = f"file:{config.cartan_file.name}"
        else:
            self.cartan = config.cartan_type.strip().upper()
            label = self.cartan
        self.L: AffineVirasoro = vt.get_algebra(self.cartan, config.normalize_form)
        self.window = TruncationWindow(config.window)
        self.report = RunReport(
            cartan_type=label, window=config.window, degrees=config.solver_degrees,
            task=config.task.value, selector=config.selector.value, seed=config.seed)

    # --------------------------------------------------------
    # helpers
    # --------------------------------------------------------

    def _claim(self, task: Task, anchor: str, claim: str, passed: bool, dims: Optional[dict] = None,
               detail: Optional[str] = None, witness: Iterable = ()) -> None:
        result = ClaimResult(task=task.value, anchor=anchor, claim=claim, passed=bool(passed),
                             dims=dims or {}, detail=detail, witness=_witness(witness))
        self.report.claims.append(result)
        if result.passed:
            logger.info(result.line())
        else:
            logger.warning(result.line())

    def _args(self) -> dict:
        return {"normalize": self.config.normalize_form}

    def run(self) -> RunReport:
        tasks = TASK_ORDER if self.config.task is Task.ALL else (self.config.task,)
        for task in tasks:
            logger.info(f"[Run] {self.L.g.name} N={self.config.window}: tâche {task.value}")
            getattr(self, f"_task_{task.value}")()
        return self.report

    # --------------------------------------------------------
    # build: g, forme de Killing, valeurs ponctuelles du crochet
    # --------------------------------------------------------

    def _sample(self, dim: int) -> Optional[list[tuple[int, int, int]]]:
        if dim <= EXHAUSTIVE_DIM:
            return None
        rng = random.Random(self.config.seed)
        return [tuple(rng.sample(range(dim), 3)) for _ in range(SAMPLE_TRIPLES)]

    def _task_build(self) -> None:
        g = self.L.g
        b, kappa = g.basis, g.killing
        npos = len(b.roots.positive_roots)
        self.report.algebra = AlgebraInfo(
            name=g.name, rank=b.rank, dim=g.dim, positive_roots=npos,
            dual_coxeter=format_rational(dual_coxeter_number(b, kappa)),
            killing_determinant=format_rational(kappa.determinant()),
            normalized_form=g.form.normalized_form,
            graded_dims={str(d): k for d, k in self.L.graded_dims(self.window, self.config.selector).items()})
        self._claim(Task.BUILD, "simple-dimension", "dim g = 2|positive roots| + rank",
                    g.dim == 2 * npos + b.rank, {"dim": g.dim, "positive_roots": npos, "rank": b.rank})
        self._claim(Task.BUILD, "killing-nondegenerate", "Killing form is non-degenerate",
                    kappa.rank() == g.dim, {"rank": kappa.rank(), "dim": g.dim})

        triples = self._sample(b.dim)
        bad = b.jacobi_violations(triples)
        self._claim(Task.BUILD, "simple-jacobi", "Jacobi identity on the Chevalley basis", not bad,
                    {"triples": len(triples) if triples is not None else math.comb(b.dim, 3),
                     "violations": len(bad)},
                    witness=[tuple(b.labels[i] for i in t) for t in bad])

        invariance = []
        pairs = triples or list(product(range(b.dim), repeat=3))
        for x, y, z in pairs:
            lhs = kappa.value(b.bracket(x, y), {z: 1})
            rhs = kappa.value({x: 1}, b.bracket(y, z))
            if lhs != rhs:
                invariance.append((b.labels[x], b.labels[y], b.labels[z]))
        self._claim(Task.BUILD, "killing-invariant", "κ([x,y],z) = κ(x,[y,z])", not invariance,
                    {"triples": len(pairs), "violations": len(invariance)}, witness=invariance)
        self._spot_values()

    def _spot_values(self) -> None:
        L, g = self.L, self.L.g
        w = TruncationWindow(max(self.config.window, 3))
        full = Selector.FULL

        value = L.bracket(D(2), D(-2), w, full)
        expected = {D(0): -4, K2: Fraction(1, 2)}
        self._claim(Task.BUILD, "virasoro-bracket", "[d_2, d_-2] = -4 d_0 + 1/2 K2", value == expected,
                    detail=L.format_element(value))

        bad = [g.basis.labels[x] for x in range(g.dim)
               if L.bracket(D(0), Loop(x, 3), w, full) != {Loop(x, 3): 3}]
        self._claim(Task.BUILD, "degree-derivation", "[d_0, x*t^3] = 3 x*t^3 for every basis x", not bad,
                    {"checked": g.dim}, witness=bad)

        alpha = g.basis.roots.simple_roots[0]
        e, f = g.basis.e(alpha), g.basis.f(alpha)
        kef = g.form(e, f)
        value = L.bracket(Loop(e, 1), Loop(f, -1), w, full)
        expected = {Loop(k, 0): c for k, c in g.basis.bracket(e, f).items()}
        expected[K1] = kef
        self._claim(Task.BUILD, "loop-central-term", "[e*t, f*t^-1] = h + (e,f) K1", value == expected,
                    detail=f"(e,f)={format_rational(kef)}; {L.format_element(value)}")

    # --------------------------------------------------------
    # jacobi, centre
    # --------------------------------------------------------

    def _task_jacobi(self) -> None:
        L, w, s = self.L, self.window, self.config.selector
        bad = L.antisymmetry_report(w, s)
        self._claim(Task.JACOBI, "bracket-antisymmetry", f"[a,b] = -[b,a] on {s.value}", not bad,
                    {"violations": len(bad)}, witness=bad)
        bad = L.degree_additivity_report(w, s)
        self._claim(Task.JACOBI, "degree-additivity", f"deg [a,b] = deg a + deg b on {s.value}", not bad,
                    {"violations": len(bad)}, witness=bad)
        report = L.jacobi_report(w, s)
        self._claim(Task.JACOBI, "jacobi-identity", f"Jacobi on all safe triples of {s.value}", report.ok,
                    {"triples": report.triples_checked, "violations": len(report.violations)},
                    witness=report.violations)
        if s is Selector.FULL:
            bad = L.ideal_report(w)
            self._claim(Task.JACOBI, "gtilde-ideal", "[L, g~] lies in g~", not bad,
                        {"violations": len(bad)}, witness=bad)

    def _task_center(self) -> None:
        L, w, s = self.L, self.window, self.config.selector
        center = L.center_degree0(w, s)
        labels = L.center_labels(w, s, center)
        self.report.center = CenterReport(selector=s.value, N=w.N, center_dim=center.dim, basis=labels)
        expected = EXPECTED_CENTER[s]
        self._claim(Task.CENTER, "center", f"degree-0 center of {s.value} = span{{{', '.join(expected)}}}",
                    labels == expected, {"center_dim": center.dim}, detail=", ".join(labels) or "0")

    # --------------------------------------------------------
    # dérivations
    # --------------------------------------------------------

    @staticmethod
    def _derivation_ok(row: dict) -> bool:
        return row["interior_equal"] and row["h1"] == 0 and row["inner_contained"]

    def _derivation_claims(self, rows: list[dict], anchor: str, statement: str) -> None:
        for row in rows:
            self.report.derivations.append(DerivationRow(**row))
            if not row.get("asserted", True):
                logger.info(f"[Der] {row['selector']}->{row['target']} n={row['n']}: ligne informative, "
                            f"der={row['dim_der_interior']} inner={row['dim_inner_interior']}")
                continue
            passed = self._derivation_ok(row)
            self._claim(Task.DERIVE, anchor, f"{statement}, homogeneous degree n={row['n']}", passed,
                        {"N": row["N"], "M": row["M"], "der": row["dim_der_interior"],
                         "inner": row["dim_inner_interior"], "h1": row["h1"]})

    def _task_derive(self) -> None:
        cfg, cartan = self.config, self.cartan
        degrees = cfg.solver_degrees
        if not degrees:
            raise ConfigError(f"aucun degré de dérivation pour N={cfg.window} (N ≥ 2 requis)")
        rows = _gather(vt.derivation_row.s(cartan, Selector.FULL.value, Selector.FULL.value, cfg.window, n,
                                           cfg.margin, **self._args()) for n in degrees)
        self._derivation_claims(rows, "derivations-inner", "Der(L)_n = Inn(L)_n on the interior")

        # n = 0 informatif pour la décomposition ; H1(L, g~) = 0 couvre tous les degrés
        rows = _gather(vt.nonzero_degree_row.s(cartan, cfg.window, n, cfg.margin, **self._args())
                       for n in degrees)
        self._derivation_claims(rows, "nonzero-degree-derivations-inner",
                                "Der(L, g~)_n = Inn(L, g~)_n on the interior for n != 0")
        failed = [row["n"] for row in rows if not self._derivation_ok(row)]
        self._claim(Task.DERIVE, "derivations-into-gtilde-inner",
                    f"H1(L, g~) = 0 on the interior, homogeneous degrees {','.join(map(str, degrees))}", not failed,
                    {"N": cfg.window, "degrees": len(rows), "h1": sum(row["h1"] for row in rows)},
                    witness=[f"n={n}" for n in failed])

        vir_window = max(cfg.window, 8)
        rows = _gather(vt.derivation_row.s(cartan, Selector.VIR.value, Selector.VIR.value, vir_window, n,
                                           None, **self._args()) for n in (-1, 0, 1))
        self._derivation_claims(rows, "virasoro-h1-zero", "Der(Vir)_n = Inn(Vir)_n on the interior")

        gap = vt.gamma_gap.s(cartan, cfg.window, **self._args()).apply_async().get(timeout=CELERY_RESULT_TIMEOUT)
        self._claim(Task.DERIVE, "gtilde-gamma-gap", "Der(g~)_0 = Inn(g~)_0 + C gamma on the interior", gap["ok"],
                    {"N": gap["N"], "M": gap["M"], "der": gap["dim_der_interior"],
                     "inner": gap["dim_inner_interior"]})

        endo = vt.quotient_endomorphisms.s(cartan, cfg.window, **self._args()).apply_async().get(
            timeout=CELERY_RESULT_TIMEOUT)
        self._claim(Task.DERIVE, "quotient-endomorphisms-scalar", "End_L(L/Z)_0 is the scalars on the interior",
                    endo["dim"] == 1, {"N": endo["N"], "dim": endo["dim"]})

        if cfg.oracle:
            dense = vt.dense_derivations.s(cartan, **self._args()).apply_async().get(timeout=CELERY_RESULT_TIMEOUT)
            self._claim(Task.DERIVE, "dense-derivation-oracle", "graded and dense Der(g) agree, Der(g) = ad g",
                        dense["equal"] and dense["dim_dense"] == self.L.g.dim,
                        {"graded": dense["dim_graded"], "dense": dense["dim_dense"]})

    def _task_lemmas(self) -> None:
        cartan = self.cartan
        ms = [m for m in range(-3, 4) if m != 0]
        results = _gather(vt.degree_zero_cohomology.s(cartan, m, **self._args()) for m in ms)
        failed = [r["m"] for r in results if not r["ok"]]
        self._claim(Task.LEMMAS, "degree-zero-cohomology", "H1(L_0, g*t^m) = 0 for 0 < |m| <= 3", not failed,
                    {"checked": len(results), "failures": len(failed)}, witness=[f"m={m}" for m in failed])

        pairs = [(m, n) for m in range(-3, 4) for n in range(-3, 4) if m != n]
        results = _gather(vt.degree_zero_homs.s(cartan, m, n, **self._args()) for m, n in pairs)
        failed = [r for r in results if r["dim"]]
        self._claim(Task.LEMMAS, "degree-zero-homs", "Hom_{L_0}(L_m, g~_n) = 0 for m != n, |m|,|n| <= 3",
                    not failed, {"checked": len(results), "failures": len(failed)},
                    witness=[f"m={r['m']}, n={r['n']}: dim {r['dim']}" for r in failed])

    # --------------------------------------------------------
    # bidérivations
    # --------------------------------------------------------

    def _require_bider_degrees(self) -> list[int]:
        degrees = self.config.bider_degrees
        if not degrees:
            raise ConfigError(f"fenêtre N={self.config.window} trop petite pour les bidérivations (N ≥ 3)")
        return degrees

    def _task_bider(self) -> None:
        cfg, cartan = self.config, self.cartan
        degrees = self._require_bider_degrees()
        symmetries = [cfg.symmetry] if cfg.symmetry else [Symmetry.SKEW, Symmetry.SYMMETRIC, Symmetry.NONE]
        problems = [(s, n) for s in symmetries for n in degrees]
        rows = _gather(vt.biderivation_row.s(cartan, Selector.FULL.value, cfg.window, n, s.value, cfg.margin,
                                             **self._args()) for s, n in problems)
        if cfg.symmetry in (None, Symmetry.SYMMETRIC):
            rows += _gather([vt.biderivation_row.s(cartan, Selector.VIR.value, cfg.window, 0,
                                                   Symmetry.SYMMETRIC.value, cfg.margin, **self._args())])
        for row in rows:
            self.report.biderivations.append(BiderivationRow(**row))
            self._bider_claim(row)

        annihilation = [r for r in rows if r["center_annihilation_ok"] is not None]
        self._claim(Task.BIDER, "center-annihilation", "F(a, z) = F(z, a) = 0 for central z, every solution",
                    all(r["center_annihilation_ok"] for r in annihilation), {"rows": len(annihilation)},
                    witness=[f"{r['symmetry']} n={r['n']}" for r in annihilation if not r["center_annihilation_ok"]])

        if cfg.symmetry in (None, Symmetry.SKEW):
            for row in _gather(vt.quotient_row.s(cartan, cfg.window, n, **self._args()) for n in degrees):
                expected = 1 if row["n"] == 0 else 0
                passed = (row["dim_quotient_interior"] == expected and row["image_in_quotient_space"]
                          and row["injective_on_interior"])
                self._claim(Task.BIDER, "quotient-skew-inner",
                            f"skew biderivations of L/Z, n={row['n']}: interior dim {expected}, F -> F~ injective",
                            passed, {"N": row["N"], "full": row["dim_full_interior"],
                                     "quotient": row["dim_quotient_interior"]})

        if cfg.symmetry is None:
            for row in _gather(vt.decomposition.s(cartan, Selector.FULL.value, cfg.window, n, **self._args())
                               for n in degrees):
                self._claim(Task.BIDER, "sym-skew-decomposition", f"Bider_n = Sym_n + Skew_n, n={row['n']}",
                            row["ok"], {"none": row["dim_none"], "sym": row["dim_sym"], "skew": row["dim_skew"]})

        if self.L.g.dim <= SEMISIMPLE_MAX_DIM:
            base = vt.semisimple_base.s(cartan, **self._args()).apply_async().get(timeout=CELERY_RESULT_TIMEOUT)
            self._claim(Task.BIDER, "semisimple-base-trivial",
                        "mixed and symmetric base systems over g have only the zero solution",
                        base["ok"], base["dims"])
        else:
            logger.warning(f"cas de base semi-simples ignorés: dim g = {self.L.g.dim} > {SEMISIMPLE_MAX_DIM}")

        if cfg.oracle:
            self._bider_oracle()

    def _bider_claim(self, row: dict) -> None:
        symmetry, n, dim = Symmetry(row["symmetry"]), row["n"], row["dim_interior"]
        dims = {"N": row["N"], "M": row["M"], "raw": row["dim_raw"], "interior": dim}
        if row["selector"] == Selector.VIR.value:
            self._claim(Task.BIDER, "virasoro-symmetric-trivial", "symmetric biderivations of Vir vanish",
                        dim == 0, dims)
        elif symmetry is Symmetry.SKEW and n == 0:
            self._claim(Task.BIDER, "skew-biderivations-inner", "skew biderivations of degree 0 are C F_1",
                        dim == 1 and bool(row["contains_F1"]) and row.get("factorises") is not False, dims)
        elif symmetry is Symmetry.SYMMETRIC:
            self._claim(Task.BIDER, "symmetric-biderivations-trivial",
                        f"homogeneous symmetric biderivations vanish, n={n}", dim == 0, dims)
        else:
            expected = 1 if n == 0 else 0
            self._claim(Task.BIDER, "biderivations-graded",
                        f"homogeneous {symmetry.value} biderivations of degree {n}: interior dim {expected}",
                        dim == expected and row["contains_F1"] is not False, dims)

    def _bider_oracle(self) -> None:
        w = TruncationWindow(2)
        dim = self.L.truncate(w, Selector.FULL).dim
        if dim ** 3 > ORACLE_MAX_UNKNOWNS:
            logger.warning(f"oracle dense ignoré: {dim ** 3} inconnues > {ORACLE_MAX_UNKNOWNS}")
            return
        rows = vt.biderivation_oracle.s(self.cartan, 2, [-1, 0, 1], **self._args()).apply_async().get(
            timeout=CELERY_RESULT_TIMEOUT)
        for row in rows:
            self._claim(Task.BIDER, "dense-biderivation-oracle",
                        f"dense solve projected to degree {row['n']} = graded solve", row["equal"],
                        {"graded": row["dim_graded"], "dense": row["dim_dense_projection"]})

    # --------------------------------------------------------
    # post-Lie
    # --------------------------------------------------------

    def _task_postlie(self) -> None:
        cfg = self.config
        degrees = self._require_bider_degrees()
        rows = _gather(vt.postlie_row.s(self.cartan, Selector.FULL.value, cfg.window, n, **self._args())
                       for n in degrees)
        for row in rows:
            self.report.postlie.append(PostLieRow(**row))
            self._claim(Task.POSTLIE, "postlie-trivial", f"commutative post-Lie structures vanish, n={row['n']}",
                        row["postlie_trivial"], {"N": row["N"], "sym_interior": row["sym_bider_dim_interior"]})

        for s in (Selector.FULL, Selector.QUOTIENT):
            check = is_commutative_postlie(BilinearProduct.zero(self.L.truncate(self.window, s)), self.window, s)
            self._claim(Task.POSTLIE, "zero-product-postlie", f"the zero product satisfies all axioms on {s.value}",
                        check.ok, witness=map(str, check.violations))

        alg = self.L.truncate(self.window, Selector.FULL)
        f1 = BilinearProduct.from_maps(inner_biderivation(self.L, 1, self.window, Selector.FULL))
        check = is_commutative_postlie(f1)
        first = [v for v in check.violations if v.axiom == "commutativity"]
        self._claim(Task.POSTLIE, "inner-product-not-commutative", "F_1 fails commutativity with a witness",
                    bool(first), detail=str(first[0]) if first else None)

        rand = random_bilinear_product(alg, 0, cfg.seed)
        rejected = not is_commutative_postlie(rand).ok and not postlie_to_biderivation(rand)[1].ok
        self._claim(Task.POSTLIE, "random-product-rejected",
                    "a random symmetric product fails the axioms and the biderivation identities", rejected,
                    {"coefficients": sum(len(v) for v in rand.values.values())})

        bad = corrupt(BilinearProduct.zero(alg), cfg.seed)
        axioms, (_, bider) = is_commutative_postlie(bad), postlie_to_biderivation(bad)
        self._claim(Task.POSTLIE, "corrupted-product-rejected",
                    "a one-coefficient perturbation of 0 fails commutativity and the biderivation identities",
                    not axioms.ok and not bider.ok, detail=str(bider.failures[0]) if bider.failures else None)


def run(config: RunConfig) -> RunReport:
    return Runner(config).run()
