import json
import logging
from pathlib import Path
from typing import List, NamedTuple, Tuple

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from app_utils.logging import LoggerAddTag

from .. import __title__
from ..app_settings import OVERHEADLAB_OUTPUT_DIR
from ..constants import ExitCode, FormulaMode
from ..overhead import MonitoredRoute, NetworkShape, coerce_routes

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


class ParamRow(NamedTuple):
    name: str
    shape: NetworkShape
    routes: Tuple[MonitoredRoute, ...]
    data: dict


def validation_message(ex: ValidationError) -> str:
    return "; ".join(ex.messages)


class OverheadLabCommand(BaseCommand):
    """Base for all commands of this app.

    Subclasses implement run(). Invalid input ends the command with exit code 2,
    any other failure with exit code 3.
    """

    def run(self, *args, **options):
        raise NotImplementedError()

    def handle(self, *args, **options):
        try:
            self.run(*args, **options)
        except CommandError:
            raise
        except ValidationError as ex:
            raise CommandError(
                validation_message(ex), returncode=ExitCode.VALIDATION
            )
        except json.JSONDecodeError as ex:
            raise CommandError(
                "invalid JSON: %s" % ex, returncode=ExitCode.VALIDATION
            )
        except Exception as ex:
            logger.exception("Command failed")
            raise CommandError(
                "%s: %s" % (type(ex).__name__, ex), returncode=ExitCode.RUNTIME
            )

    def add_out_argument(self, parser, default=None):
        parser.add_argument(
            "--out",
            default=default,
            help="output directory (default: %s)" % (default or "no files written"),
        )

    @staticmethod
    def output_dir(options, default=OVERHEADLAB_OUTPUT_DIR) -> Path:
        path = Path(options.get("out") or default)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, path: Path, data) -> None:
        with Path(path).open("w", encoding="utf-8") as file:
            json.dump(data, file, indent=2, sort_keys=True)
            file.write("\n")
        self.stdout.write("Wrote %s" % path)

    def write_table(self, headers: List[str], rows: List[list]) -> None:
        """Print rows as aligned text columns."""
        cells = [[str(header) for header in headers]] + [
            [format_value(value) for value in row] for row in rows
        ]
        widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
        for row in cells:
            self.stdout.write(
                "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
            )


def format_value(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def add_formula_mode_argument(parser) -> None:
    parser.add_argument(
        "--formula-mode",
        choices=FormulaMode.values,
        default=None,
        help="reading of the outer tier sum of the request overhead",
    )


def load_json_file(path) -> object:
    path = Path(path)
    if not path.is_file():
        raise ValidationError("file %s not found" % path, code="not_found")
    with path.open("r", encoding="utf-8") as file:
        return json.load(file)


def load_param_rows(path, formula_mode: str = None) -> List[ParamRow]:
    """Parameter rows from a JSON file.

    The file is a list of rows or an object with a "rows" list. A row holds
    the NetworkShape fields plus optional "name", "routes" and "delta".
    """
    data = load_json_file(path)
    if isinstance(data, dict):
        data = data.get("rows", [])
    if not isinstance(data, list):
        raise ValidationError("parameter file must hold a list of rows")
    rows = []
    for index, raw in enumerate(data):
        if not isinstance(raw, dict):
            raise ValidationError("row %d: must be an object" % index)
        try:
            shape = NetworkShape.from_dict(raw, formula_mode=formula_mode)
            routes = tuple(coerce_routes(raw.get("routes", ())))
        except ValidationError as ex:
            raise ValidationError(
                "row %d: %s" % (index, validation_message(ex)), code="invalid"
            )
        rows.append(
            ParamRow(
                name=str(raw.get("name", "row%d" % index)),
                shape=shape,
                routes=routes,
                data=raw,
            )
        )
    return rows
