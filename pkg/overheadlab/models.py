from django.db import models
from django.utils.timezone import now

from .constants import SweepAxis
from .managers import SimulationRunManager, SweepManager
from .metrics import RunReport
from .sweeps import SweepSpec


class Sweep(models.Model):
    """A stored parameter sweep and the state of its execution"""

    class Status(models.TextChoices):
        PENDING = "pending"
        DONE = "done"
        FAILED = "failed"

    name = models.CharField(max_length=254)
    axis = models.CharField(max_length=16, choices=SweepAxis.choices)
    spec = models.JSONField(help_text="sweep definition as loaded")
    status = models.CharField(
        max_length=16, choices=Status.choices, default=Status.PENDING, db_index=True
    )
    created_at = models.DateTimeField(auto_now_add=True, db_index=True)
    finished_at = models.DateTimeField(null=True, default=None, blank=True)

    objects = SweepManager()

    class Meta:
        get_latest_by = "created_at"

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"{type(self).__name__}(pk={self.pk}, name='{self.name}')"

    def to_spec(self) -> SweepSpec:
        return SweepSpec.from_dict(self.spec)

    def finalize(self) -> bool:
        """Mark the sweep done, or failed when a run failed. True when done."""
        failed = (
            self.runs.failed().exists()
            or self.runs.filter(report__isnull=True).exists()
        )
        self.status = self.Status.FAILED if failed else self.Status.DONE
        self.finished_at = now()
        self.save(update_fields=["status", "finished_at"])
        return not failed


class SimulationRun(models.Model):
    """One simulation of a sweep cell: axis value, protocol and seed"""

    sweep = models.ForeignKey(Sweep, on_delete=models.CASCADE, related_name="runs")
    axis_index = models.PositiveIntegerField(help_text="position of value in sweep")
    value = models.JSONField(help_text="axis value of this run")
    protocol = models.CharField(max_length=254)
    seed = models.PositiveIntegerField()
    report = models.JSONField(null=True, default=None, blank=True)
    error = models.TextField(default="", blank=True)
    finished_at = models.DateTimeField(null=True, default=None, blank=True)

    objects = SimulationRunManager()

    class Meta:
        constraints = [
            models.UniqueConstraint(
                fields=["sweep", "axis_index", "protocol", "seed"],
                name="overheadlab_unique_sweep_cell",
            )
        ]

    def __str__(self):
        return f"{self.sweep}: {self.value} {self.protocol} seed {self.seed}"

    def __repr__(self):
        return (
            f"{type(self).__name__}(pk={self.pk}, sweep_id={self.sweep_id}, "
            f"protocol='{self.protocol}', seed={self.seed})"
        )

    @property
    def is_finished(self) -> bool:
        return self.report is not None

    def run_report(self) -> RunReport:
        return RunReport.from_dict(self.report)

    def store_report(self, report: RunReport) -> None:
        self.report = report.to_dict()
        self.error = ""
        self.finished_at = now()
        self.save(update_fields=["report", "error", "finished_at"])

    def store_error(self, error: str) -> None:
        self.report = None
        self.error = error
        self.finished_at = now()
        self.save(update_fields=["report", "error", "finished_at"])
