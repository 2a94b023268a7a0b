"""
affvir: construction de L(g) et vérification exacte sur fenêtres tronquées.

Usage:
    python -m app.cli --type A1 --window 4 --task all --format json
    python -m app.cli --cartan-file ma_matrice.txt --task build

Codes de sortie: 0 tout vérifié, 1 vérification en échec, 2 configuration invalide.
Le rapport va sur stdout, les logs sur stderr.
"""
import logging
import sys
from typing import Optional

import click
from pydantic import ValidationError

from app.algebra.affine_virasoro import Selector
from app.cli.runner import OutputFormat, RunConfig, Task, run
from app.config import AFFVIR_DEFAULT_TYPE, AFFVIR_DEFAULT_WINDOW, AFFVIR_NORMALIZE_FORM, AFFVIR_SEED, LOG_LEVEL
from app.errors import AffvirError
from app.solvers.biderivations import Symmetry

logger = logging.getLogger("affvir")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _parse_degrees(ctx, param, value: Optional[str]) -> Optional[tuple[int, ...]]:
    if value is None:
        return None
    try:
        return tuple(int(x) for x in value.replace(" ", "").split(",") if x)
    except ValueError:
        raise click.BadParameter(f"liste d'entiers attendue, reçu {value!r}")


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--type", "cartan_type", default=AFFVIR_DEFAULT_TYPE, show_default=True,
              help="Type de Cartan fini: A1..A8, B2.., C3.., D4.., E6-E8, F4, G2.")
@click.option("--cartan-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Matrice de Cartan personnalisée (rang puis lignes d'entiers).")
@click.option("--window", type=click.IntRange(min=1), default=AFFVIR_DEFAULT_WINDOW, show_default=True,
              help="Fenêtre de troncature N (degrés -N..N).")
@click.option("--degrees", callback=_parse_degrees, default=None,
              help="Degrés résolus, ex. '-1,0,1' (défaut: |n| <= N-2).")
@click.option("--task", type=click.Choice([t.value for t in Task]), default=Task.ALL.value, show_default=True)
@click.option("--selector", type=click.Choice([s.value for s in Selector]), default=Selector.FULL.value,
              show_default=True, help="Sous-algèbre pour jacobi/center.")
@click.option("--symmetry", type=click.Choice([s.value for s in Symmetry]), default=None,
              help="Restreint les bidérivations à une symétrie.")
@click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]), default=OutputFormat.TEXT.value,
              show_default=True)
@click.option("--seed", type=int, default=AFFVIR_SEED, show_default=True)
@click.option("--margin", type=click.IntRange(min=1), default=None, help="Marge intérieure M imposée.")
@click.option("--oracle", is_flag=True, default=False, help="Ajoute les comparaisons aux solveurs denses.")
@click.option("--normalize-form/--killing-form", default=AFFVIR_NORMALIZE_FORM, show_default=True,
              help="Forme invariante normalisée (θ,θ)=2 au lieu de la forme de Killing.")
@click.option("--log-level", default=LOG_LEVEL, show_default=True)
def main(cartan_type: str, cartan_file: Optional[str], window: int, degrees: Optional[tuple[int, ...]], task: str,
         selector: str, symmetry: Optional[str], fmt: str, seed: int, margin: Optional[int], oracle: bool,
         normalize_form: bool, log_level: str) -> None:
    """Vérifie les énoncés de structure de L(g) par algèbre linéaire exacte."""
    logging.basicConfig(level=log_level.upper(), stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        config = RunConfig(
            cartan_type=cartan_type, cartan_file=cartan_file, window=window, degrees=degrees, task=task,
            selector=selector, symmetry=symmetry, format=fmt, seed=seed, margin=margin, oracle=oracle,
            normalize_form=normalize_form)
        report = run(config)
    except (AffvirError, ValidationError) as e:
        logger.error(f"configuration invalide: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_CONFIG)

    if config.format is OutputFormat.JSON:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(report.to_text())
    sys.exit(EXIT_OK if report.passed else EXIT_FAILED)


if __name__ == "__main__":
    main()
