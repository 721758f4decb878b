import csv
import io
import json
import math

import structlog

from selfnorm.EnumUtil import LowerCaseEnum


class OutputFormat(LowerCaseEnum):
    Csv = "csv"
    Json = "json"


class RecordWriter:
    """
    Renders dataclass_json records as CSV (LF line endings) or JSON.
    Reals are written with a fixed number of significant digits, non-finite reals as inf/-inf/nan
    and missing values as an empty CSV field or JSON null.
    """
    log = structlog.get_logger()

    def __init__(self, significantDigits: int = 12):
        self.significantDigits = significantDigits

    def formatValue(self, value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            if math.isnan(value):
                return "nan"
            if math.isinf(value):
                return "inf" if value > 0 else "-inf"
            return f"{value:.{self.significantDigits}g}"
        return str(value)

    def _jsonValue(self, value):
        if isinstance(value, float) and not isinstance(value, bool):
            if math.isfinite(value):
                return float(self.formatValue(value))
            return self.formatValue(value)
        return value

    def renderCsv(self, records: list) -> str:
        rows = [r.to_dict() for r in records]
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if rows:
            writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow([self.formatValue(v) for v in row.values()])
        return buffer.getvalue()

    def renderJson(self, records: list) -> str:
        rows = [{k: self._jsonValue(v) for k, v in r.to_dict().items()} for r in records]
        return json.dumps(rows, indent=2) + "\n"

    def render(self, records: list, fmt: OutputFormat) -> str:
        match fmt:
            case OutputFormat.Csv:
                return self.renderCsv(records)
            case OutputFormat.Json:
                return self.renderJson(records)

    def write(self, records: list, fmt: OutputFormat, path: str | None = None) -> str:
        """
        Renders the records and writes them to path, or returns them for stdout when path is None
        """
        text = self.render(records, fmt)
        if path is not None:
            with open(path, "w", newline="") as f:
                f.write(text)
            self.log.info(f"Wrote {len(records)} records to {path}")
        return text

    @staticmethod
    def parseCsv(text: str) -> list[dict[str, str]]:
        return list(csv.DictReader(io.StringIO(text)))

    @staticmethod
    def parseReal(field: str) -> float | None:
        """
        Inverse of formatValue for real columns
        """
        if field == "":
            return None
        return float(field)
