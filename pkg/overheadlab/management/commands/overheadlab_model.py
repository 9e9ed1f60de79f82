from ...overhead import aggregate_overhead
from ..base import OverheadLabCommand, add_formula_mode_argument, load_param_rows

COLUMNS = ["name", "rreq", "rrep", "discovery", "hello", "total"]


class Command(OverheadLabCommand):
    help = "Evaluate the analytic overhead model for each row of a parameter file"

    def add_arguments(self, parser):
        parser.add_argument("params_file", help="JSON file with parameter rows")
        add_formula_mode_argument(parser)
        self.add_out_argument(parser)

    def run(self, *args, **options):
        rows = load_param_rows(options["params_file"], options["formula_mode"])
        results = []
        for row in rows:
            breakdown = aggregate_overhead(row.shape, row.routes)
            results.append(
                {
                    "name": row.name,
                    "shape": row.shape.to_dict(),
                    "routes": [route.to_dict() for route in row.routes],
                    "breakdown": breakdown.to_dict(),
                }
            )
        self.write_table(
            COLUMNS,
            [
                [result["name"]] + [result["breakdown"][key] for key in COLUMNS[1:]]
                for result in results
            ],
        )
        if options["out"]:
            self.write_json(self.output_dir(options) / "model.json", results)
