"""
Configuration de l'atelier affine-Virasoro.

Toutes les variables sont configurables via .env (ou l'environnement).
Les options de la ligne de commande ont toujours priorité sur ces valeurs.
"""
import os
from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


# ============================================================
# ALGÈBRE
# ============================================================
AFFVIR_MAX_RANK = int(os.getenv("AFFVIR_MAX_RANK", "8"))  # tables bornées au-delà
AFFVIR_DEFAULT_TYPE = os.getenv("AFFVIR_DEFAULT_TYPE", "A1").strip()
AFFVIR_DEFAULT_WINDOW = int(os.getenv("AFFVIR_DEFAULT_WINDOW", "4"))
# Forme de Killing telle quelle (défaut) ou forme invariante normalisée (θ,θ)=2
AFFVIR_NORMALIZE_FORM = _flag("AFFVIR_NORMALIZE_FORM", "false")
AFFVIR_SEED = int(os.getenv("AFFVIR_SEED", "0"))

# ============================================================
# CELERY - FAN-OUT DES PROBLÈMES
# ============================================================
# Eager: les tâches tournent dans le process courant, aucun broker requis
AFFVIR_EAGER = _flag("AFFVIR_EAGER", "true")
AFFVIR_THREADS = int(os.getenv("AFFVIR_THREADS", "4"))  # concurrency du worker
REDIS_URL = os.getenv("REDIS_URL", "redis://localhost:6379/0").strip()
BROKER_URL = os.getenv("BROKER_URL", REDIS_URL).strip()
RESULT_BACKEND = os.getenv("RESULT_BACKEND", REDIS_URL).strip()
CELERY_QUEUES = os.getenv("CELERY_QUEUES", "solvers").strip()
CELERY_TASK_TIME_LIMIT = int(os.getenv("CELERY_TASK_TIME_LIMIT", "3600"))
CELERY_RESULT_TIMEOUT = int(os.getenv("CELERY_RESULT_TIMEOUT", "3600"))

# ============================================================
# LOGS
# ============================================================
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").strip().upper()
