import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="Sweep",
            fields=[
                (
                    "id",
                    models.AutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("name", models.CharField(max_length=254)),
                (
                    "axis",
                    models.CharField(
                        choices=[
                            ("mobility", "Mobility"),
                            ("scalability", "Scalability"),
                            ("traffic", "Traffic"),
                        ],
                        max_length=16,
                    ),
                ),
                ("spec", models.JSONField(help_text="sweep definition as loaded")),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("pending", "Pending"),
                            ("done", "Done"),
                            ("failed", "Failed"),
                        ],
                        db_index=True,
                        default="pending",
                        max_length=16,
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True, db_index=True)),
                (
                    "finished_at",
                    models.DateTimeField(blank=True, default=None, null=True),
                ),
            ],
            options={
                "get_latest_by": "created_at",
            },
        ),
        migrations.CreateModel(
            name="SimulationRun",
            fields=[
                (
                    "id",
                    models.AutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "axis_index",
                    models.PositiveIntegerField(
                        help_text="position of value in sweep"
                    ),
                ),
                ("value", models.JSONField(help_text="axis value of this run")),
                ("protocol", models.CharField(max_length=254)),
                ("seed", models.PositiveIntegerField()),
                ("report", models.JSONField(blank=True, default=None, null=True)),
                ("error", models.TextField(blank=True, default="")),
                (
                    "finished_at",
                    models.DateTimeField(blank=True, default=None, null=True),
                ),
                (
                    "sweep",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="runs",
                        to="overheadlab.sweep",
                    ),
                ),
            ],
        ),
        migrations.AddConstraint(
            model_name="simulationrun",
            constraint=models.UniqueConstraint(
                fields=("sweep", "axis_index", "protocol", "seed"),
                name="overheadlab_unique_sweep_cell",
            ),
        ),
    ]
