import logging
from typing import List

from django.db import models, transaction

from app_utils.logging import LoggerAddTag

from . import __title__
from .metrics import RunReport
from .sweeps import SweepSpec, summarize

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


class SweepManager(models.Manager):
    def create_from_spec(self, spec: SweepSpec) -> models.Model:
        """Store a new sweep with one pending run per cell."""
        with transaction.atomic():
            sweep = self.create(name=spec.name, axis=spec.axis, spec=spec.to_dict())
            sweep.runs.bulk_create(
                [
                    sweep.runs.model(
                        sweep=sweep,
                        axis_index=cell.axis_index,
                        value=cell.value,
                        protocol=cell.protocol,
                        seed=cell.seed,
                    )
                    for cell in spec.cells()
                ]
            )
        logger.info("Created sweep %s with %d runs", sweep.name, spec.run_count)
        return sweep


class SimulationRunQuerySet(models.QuerySet):
    def ordered(self) -> models.QuerySet:
        """Runs in export order: axis value, protocol, seed."""
        return self.order_by("sweep_id", "axis_index", "protocol", "seed")

    def finished(self) -> models.QuerySet:
        return self.filter(report__isnull=False)

    def failed(self) -> models.QuerySet:
        return self.exclude(error="")

    def reports(self) -> List[RunReport]:
        return [
            RunReport.from_dict(run.report) for run in self.finished().ordered()
        ]

    def axis_values(self) -> list:
        """Axis value of each finished run, in the order of reports()."""
        return [run.value for run in self.finished().ordered()]

    def summary(self) -> List[dict]:
        """Mean and standard deviation per axis value and protocol."""
        return summarize(
            [
                (run.value, run.protocol, RunReport.from_dict(run.report))
                for run in self.finished().ordered()
            ]
        )


class SimulationRunManager(models.Manager):
    def get_queryset(self) -> models.QuerySet:
        return SimulationRunQuerySet(self.model, using=self._db)

    def ordered(self) -> models.QuerySet:
        return self.get_queryset().ordered()

    def finished(self) -> models.QuerySet:
        return self.get_queryset().finished()

    def failed(self) -> models.QuerySet:
        return self.get_queryset().failed()

    def reports(self) -> List[RunReport]:
        return self.get_queryset().reports()

    def axis_values(self) -> list:
        return self.get_queryset().axis_values()

    def summary(self) -> List[dict]:
        return self.get_queryset().summary()
