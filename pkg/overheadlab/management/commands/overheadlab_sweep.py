from django.core.management.base import CommandError

from ... import tasks
from ...app_settings import OVERHEADLAB_OUTPUT_DIR
from ...constants import ExitCode
from ...models import SimulationRun, Sweep
from ...sweeps import load_sweep
from ..base import OverheadLabCommand


class Command(OverheadLabCommand):
    help = (
        "Run a parameter sweep: every axis value with every protocol and seed. "
        "Writes a CSV of all runs and a summary with mean and standard deviation."
    )

    def add_arguments(self, parser):
        parser.add_argument("sweep", help="bundled sweep name or JSON file")
        parser.add_argument(
            "--celery",
            action="store_true",
            help="queue the runs as celery tasks instead of running them here",
        )
        self.add_out_argument(parser, default=OVERHEADLAB_OUTPUT_DIR)

    def run(self, *args, **options):
        spec = load_sweep(options["sweep"])
        out_dir = self.output_dir(options)
        csv_path = out_dir / ("%s.csv" % spec.name)
        sweep = Sweep.objects.create_from_spec(spec)
        self.stdout.write(
            "Sweep %s: %d runs (%d values x %d protocols x %d seeds)"
            % (
                spec.name,
                spec.run_count,
                len(spec.values),
                len(spec.protocols),
                len(spec.seeds),
            )
        )
        if options["celery"]:
            tasks.run_sweep.delay(sweep.pk, str(csv_path))
            self.stdout.write("Queued sweep %d" % sweep.pk)
            return

        for run in SimulationRun.objects.filter(sweep=sweep).ordered():
            tasks.run_sweep_cell(run.pk)
            run.refresh_from_db()
            if run.error:
                self.stderr.write("%s: %s" % (run, run.error))
                break
        is_done = tasks.finalize_sweep(sweep.pk, str(csv_path))
        self.stdout.write("Wrote %s" % csv_path)
        if not is_done:
            raise CommandError(
                "sweep %s aborted, partial results in %s" % (spec.name, csv_path),
                returncode=ExitCode.RUNTIME,
            )
        self.write_json(
            out_dir / ("%s-summary.json" % spec.name),
            {"sweep": spec.to_dict(), "summary": sweep.runs.summary()},
        )
        self.stdout.write(self.style.SUCCESS("Sweep completed"))
