import logging
from pathlib import Path

from celery import chain, group, shared_task

from app_utils.logging import LoggerAddTag

from . import __title__
from .engine.simulator import run_scenario
from .helpers.writers import write_reports_csv
from .models import SimulationRun, Sweep

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


@shared_task(name="overheadlab.run_sweep")
def run_sweep(sweep_pk: int, out_path: str = None):
    """Runs all cells of a sweep in parallel, then writes its CSV"""
    run_pks = list(
        SimulationRun.objects.filter(sweep_id=sweep_pk)
        .ordered()
        .values_list("pk", flat=True)
    )
    logger.info("Sweep %d: starting %d runs", sweep_pk, len(run_pks))
    my_chain = chain(
        group(run_sweep_cell.si(run_pk) for run_pk in run_pks),
        finalize_sweep.si(sweep_pk, out_path),
    )
    my_chain.delay()


@shared_task(name="overheadlab.run_sweep_cell")
def run_sweep_cell(run_pk: int):
    """Simulates one sweep cell and stores its report or error"""
    try:
        run = SimulationRun.objects.select_related("sweep").get(pk=run_pk)
    except SimulationRun.DoesNotExist:
        logger.warning("Can not find a simulation run with pk %d", run_pk)
        return
    spec = run.sweep.to_spec()
    try:
        result = run_scenario(
            spec.scenario_for(run.value), protocol=run.protocol, seed=run.seed
        )
    except Exception as ex:
        logger.exception("%s: run failed", run)
        run.store_error("%s: %s" % (type(ex).__name__, ex))
    else:
        run.store_report(result.report)
        logger.debug("%s: finished", run)


@shared_task(name="overheadlab.finalize_sweep")
def finalize_sweep(sweep_pk: int, out_path: str = None) -> bool:
    """Marks a sweep done or failed and writes the finished runs as CSV"""
    try:
        sweep = Sweep.objects.get(pk=sweep_pk)
    except Sweep.DoesNotExist:
        logger.warning("Can not find a sweep with pk %d", sweep_pk)
        return False
    is_done = sweep.finalize()
    if out_path:
        path = Path(out_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as file:
            count = write_reports_csv(
                file,
                sweep.runs.reports(),
                axis=sweep.axis,
                values=sweep.runs.axis_values(),
            )
        logger.info("Sweep %s: wrote %d rows to %s", sweep.name, count, path)
    if is_done:
        logger.info("Sweep %s finished", sweep.name)
    else:
        logger.warning(
            "Sweep %s failed, %d runs with errors",
            sweep.name,
            sweep.runs.failed().count(),
        )
    return is_done
