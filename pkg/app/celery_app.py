"""
Configuration Celery: fan-out des problèmes de résolution.

Par défaut (AFFVIR_EAGER=true) les tâches s'exécutent dans le process de la
CLI, sans broker. En mode distribué (AFFVIR_EAGER=false):
    celery -A app.celery_app worker --loglevel=info --pool=prefork --concurrency=$AFFVIR_THREADS

Toute la config est pilotée via les variables d'environnement (voir config.py)
"""
import logging

from celery import Celery
from kombu import Queue

from app.config import (
    AFFVIR_EAGER,
    AFFVIR_THREADS,
    BROKER_URL,
    CELERY_QUEUES,
    CELERY_TASK_TIME_LIMIT,
    RESULT_BACKEND,
)

logger = logging.getLogger(__name__)

celery = Celery(
    "affvir",
    broker=BROKER_URL,
    backend=RESULT_BACKEND,
    include=["app.tasks.verification_tasks"],
)

queue_names = [q.strip() for q in CELERY_QUEUES.split(",") if q.strip()] or ["solvers"]
task_queues = tuple(Queue(name, routing_key=name) for name in queue_names)

celery.conf.update(
    # Serialization
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",

    timezone="UTC",
    enable_utc=True,

    # Exécution locale sans broker
    task_always_eager=AFFVIR_EAGER,
    task_eager_propagates=True,

    task_track_started=True,
    task_time_limit=CELERY_TASK_TIME_LIMIT,

    task_queues=task_queues,
    task_default_queue=queue_names[0],
    task_default_routing_key=queue_names[0],

    # Calcul CPU: une tâche à la fois par process
    task_acks_late=True,
    task_reject_on_worker_lost=True,
    worker_prefetch_multiplier=1,
    worker_concurrency=AFFVIR_THREADS,

    broker_connection_retry_on_startup=True,
)

logger.debug(f"[Celery] eager={AFFVIR_EAGER} queues={queue_names} concurrency={AFFVIR_THREADS}")


if __name__ == "__main__":
    celery.start()
