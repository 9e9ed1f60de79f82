from ...app_settings import OVERHEADLAB_OUTPUT_DIR
from ...engine.scenario import load_scenario
from ...engine.simulator import Simulator
from ...helpers.writers import write_reports_csv
from ...protocols.profiles import get_profile
from ..base import OverheadLabCommand


class Command(OverheadLabCommand):
    help = "Run one simulation scenario and write its report"

    def add_arguments(self, parser):
        parser.add_argument("scenario", help="bundled scenario name or JSON file")
        parser.add_argument("--seed", type=int, default=None, help="random seed")
        parser.add_argument(
            "--protocol",
            default=None,
            help="aodv, dsr, dymo or custom:<file> (default: from scenario)",
        )
        parser.add_argument(
            "--trace", action="store_true", help="also write the event trace"
        )
        self.add_out_argument(parser, default=OVERHEADLAB_OUTPUT_DIR)

    def run(self, *args, **options):
        scenario = load_scenario(options["scenario"])
        profile = get_profile(options["protocol"] or scenario.protocol, scenario.profiles)
        simulator = Simulator(
            scenario, profile=profile, seed=options["seed"], record_trace=options["trace"]
        )
        result = simulator.run_until()
        report = result.report
        out_dir = self.output_dir(options)
        stem = "%s-%s-seed%d" % (scenario.name, profile.name, simulator.seed)
        self.write_json(out_dir / ("%s.json" % stem), report.to_dict())
        csv_path = out_dir / ("%s.csv" % stem)
        with csv_path.open("w", encoding="utf-8", newline="") as file:
            write_reports_csv(file, [report])
        self.stdout.write("Wrote %s" % csv_path)
        if options["trace"]:
            trace_path = out_dir / ("%s.trace.ndjson" % stem)
            result.write_trace(trace_path)
            self.stdout.write("Wrote %s" % trace_path)
        self.write_table(
            ["sent", "delivered", "throughput_bps", "mean_delay_s", "nrl"]
            + list(report.control_counts),
            [
                [
                    report.data_sent,
                    report.data_delivered,
                    report.throughput_bps,
                    report.mean_delay_s,
                    report.nrl,
                ]
                + list(report.control_counts.values())
            ],
        )
        self.stdout.write(self.style.SUCCESS("Simulation completed"))
