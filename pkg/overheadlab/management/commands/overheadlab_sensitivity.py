from ...constants import DerivativeMethod
from ...sensitivity import PARAMETERS, ParamDelta, compare_methods
from ..base import OverheadLabCommand, add_formula_mode_argument, load_param_rows


class Command(OverheadLabCommand):
    help = (
        "Partial derivatives and total differential of the overhead model, "
        "analytic, as printed and by finite differences side by side"
    )

    def add_arguments(self, parser):
        parser.add_argument("params_file", help="JSON file with parameter rows")
        parser.add_argument(
            "--delta",
            default=None,
            help='parameter changes like "dn=1,dT=0.5", overrides the rows\' delta',
        )
        add_formula_mode_argument(parser)
        self.add_out_argument(parser)

    def run(self, *args, **options):
        rows = load_param_rows(options["params_file"], options["formula_mode"])
        cli_delta = ParamDelta.parse(options["delta"]) if options["delta"] else None
        methods = list(DerivativeMethod.values)
        results = []
        for row in rows:
            if cli_delta is not None:
                delta = cli_delta
            else:
                delta = ParamDelta.from_dict(row.data.get("delta", {}))
            reports = compare_methods(row.shape, row.routes, delta)
            self.stdout.write("%s (delta %s)" % (row.name, delta.as_dict()))
            table = [
                [name] + [reports[method].partials[name] for method in methods]
                for name in PARAMETERS
            ]
            table.append(
                ["total"] + [reports[method].total_differential for method in methods]
            )
            self.write_table(["partial"] + methods, table)
            flags = sorted({flag for report in reports.values() for flag in report.flags})
            for flag in flags:
                self.stdout.write(self.style.WARNING("flag: %s" % flag))
            results.append(
                {
                    "name": row.name,
                    "reports": {
                        method: report.to_dict() for method, report in reports.items()
                    },
                }
            )
        if options["out"]:
            self.write_json(self.output_dir(options) / "sensitivity.json", results)
