import codecs
import csv
import json
from io import StringIO
from typing import Iterable, Mapping, Sequence

from ..constants import CSV_SCHEMA_VERSION
from ..metrics import CSV_COLUMNS

AXIS_COLUMNS = ("axis", "axis_value")


class UnicodeWriter:
    """
    A CSV writer which will write rows to CSV file "f",
    which is encoded in the given encoding.
    Values are converted to text; None becomes an empty cell.
    """

    def __init__(self, f, dialect=csv.excel, encoding="utf-8", **kwds):
        # Redirect output to a queue
        self.queue = StringIO()
        self.writer = csv.writer(self.queue, dialect=dialect, **kwds)
        self.stream = f
        self.encoder = codecs.getincrementalencoder(encoding)()

    def _write(self, data: str) -> None:
        data = self.encoder.encode(data)
        if isinstance(data, bytes) and not hasattr(self.stream, "encoding"):
            self.stream.write(data)
        else:
            self.stream.write(data.decode("utf-8") if isinstance(data, bytes) else data)

    def writecomment(self, text: str) -> None:
        self._write("# %s\r\n" % text)

    def writerow(self, row: Sequence):
        self.writer.writerow(["" if value is None else str(value) for value in row])
        # Fetch output from the queue and write it to the target stream
        self._write(self.queue.getvalue())
        # empty queue
        self.queue.seek(0)
        self.queue.truncate(0)

    def writerows(self, rows: Iterable[Sequence]):
        for row in rows:
            self.writerow(row)


def write_reports_csv(stream, reports, axis: str = None, values: Sequence = None) -> int:
    """Write run reports as a versioned CSV table. Returns the number of rows.

    When axis is given every row also carries the axis name and the axis
    value of its run, taken from values in the order of reports.
    """
    reports = list(reports)
    writer = UnicodeWriter(stream)
    writer.writecomment("schema_version=%d" % CSV_SCHEMA_VERSION)
    if axis is None:
        writer.writerow(CSV_COLUMNS)
    else:
        writer.writerow(CSV_COLUMNS + AXIS_COLUMNS)
        values = list(values or ())
        if len(values) != len(reports):
            raise ValueError("need one axis value per report")
    count = 0
    for index, report in enumerate(reports):
        row = report.csv_row()
        if axis is not None:
            value = values[index]
            if isinstance(value, Mapping):
                value = json.dumps(value, sort_keys=True)
            row = row + [axis, value]
        writer.writerow(row)
        count += 1
    return count
