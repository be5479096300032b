"""Celery application factory.

Every package registers its heavy operations as tasks on the shared Celery
instance defined here. Broker, backend and eager mode come from
:mod:`common.config`. Without a broker (the default ``memory://``) tasks run
in-process, which is what the CLI and the test-suite rely on.

Usage::

    from common.celery_app import celery_app

    @celery_app.task(name="cech.cohomology")
    def cohomology_task(...):
        ...

With docker-compose the broker is the Redis service and a worker is started
with::

    celery -A common.celery_app.celery_app worker -l info
"""

from celery import Celery

from common.config import get_settings

TASK_MODULES = [
    "cech.tasks",
    "gerbes.tasks",
    "descent.tasks",
    "twogerbe.tasks",
    "pathsu2.tasks",
    "pontryagin.tasks",
]


def create_celery_app() -> Celery:
    """Create and configure a Celery application instance."""
    settings = get_settings()
    app = Celery(
        "gerbe_lab",
        broker=settings.broker_url,
        backend=settings.result_backend,
        include=TASK_MODULES,
    )
    app.conf.update(
        task_serializer="json",
        result_serializer="json",
        accept_content=["json"],
        task_always_eager=settings.always_eager,
        task_eager_propagates=True,
        worker_cancel_long_running_tasks_on_connection_loss=True,
    )
    return app


# Export a singleton Celery app for ease of import.
celery_app = create_celery_app()
