import csv
import io
import json
import os
from typing import Iterable, Optional

import gtci
from gtci.classes import ClassificationRecord
from gtci.exceptions import OutputError

CSV_COLUMNS = [
    "id",
    "weights",
    "torsion",
    "degrees",
    "eta",
    "antican_z",
    "antican_torsion",
    "antican_cube",
    "h0",
]

FORMATS = {"json": "json", "csv": "csv", "table": "tex"}  # format -> file extension


def _dotted(values: Iterable[int]) -> str:
    return ".".join(map(str, values))


def to_json(records: Iterable[ClassificationRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2) + "\n"


def to_csv(records: Iterable[ClassificationRecord]) -> str:
    """One row per record; integer tuples dot-joined, eta rows joined by `|`."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = r.to_dict()
        row["weights"] = _dotted(row["weights"])
        row["torsion"] = _dotted(row["torsion"])
        row["degrees"] = _dotted(row["degrees"])
        row["eta"] = "|".join(_dotted(e) for e in row["eta"])
        row["antican_torsion"] = _dotted(row["antican_torsion"])
        writer.writerow(row)
    return buffer.getvalue()


def _matrix_cell(r: ClassificationRecord) -> str:
    rows = [" & ".join(map(str, r.weights))]
    rows += [" & ".join(f"\\bar{{{x}}}" for x in row) for row in r.matrix.torsion_rows]
    return "$\\left[\\begin{smallmatrix}" + " \\\\ ".join(rows) + "\\end{smallmatrix}\\right]$"


def to_table(records: Iterable[ClassificationRecord]) -> str:
    """LaTeX-like table with the columns ID, degree matrix, relation degrees, -K, -K^3, h^0(-K)."""
    lines = [
        "\\begin{longtable}{llllll}",
        "ID & $Q$ & $\\mu$ & $-\\mathcal{K}$ & $-\\mathcal{K}^3$ & $h^0(-\\mathcal{K})$ \\\\",
        "\\hline",
    ]
    for r in records:
        torsion = "".join(f", \\bar{{{x}}}" for x in r.antican_class.torsion.coords)
        lines.append(
            f"{r.id} & {_matrix_cell(r)} & ${', '.join(map(str, r.degrees))}$ & "
            f"$({r.antican_class.z}{torsion})$ & ${r.antican_cube}$ & ${r.h0}$ \\\\"
        )
    lines.append("\\end{longtable}")
    return "\n".join(lines) + "\n"


def render(records: Iterable[ClassificationRecord], fmt: str) -> str:
    if fmt == "json":
        return to_json(records)
    if fmt == "csv":
        return to_csv(records)
    if fmt == "table":
        return to_table(records)
    raise ValueError(f"unknown format '{fmt}'")


def default_path(fmt: str) -> Optional[str]:
    """`$GTCI_OUTPUT_DIR/classification.<ext>` when the variable is set."""
    directory = os.environ.get(gtci.OUTPUT_DIR_ENV)
    return os.path.join(directory, f"classification.{FORMATS[fmt]}") if directory else None


def write_output(text: str, path: str) -> str:
    """
    Writes `text` to `path`, creating no directories.

    ## Raises

    `OutputError` if the file cannot be written.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OutputError(30001, "Cannot write output", f"{path}: {e.strerror or e}") from e
    gtci.logger.debug(f"Wrote {path}")
    return path
