"""CSV output with a ``#``-prefixed metadata header."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import HarnessError
from ..streams import GENERATOR_ID

SER_COLUMNS = ("snr_db", "trials", "errors", "ser", "ci95_low", "ci95_high")
ANALYTIC_COLUMNS = ("snr_db", "p_subset_dom", "p_pam_dom", "p_total")
DESIGN_COLUMNS = ("k", "n", "p_subset_dom", "p_pam_dom", "objective", "is_best")
CONSTELLATION_COLUMNS = ("index", "subset_k", "amplitude_i", "re", "im")

SNR_CONVENTION = "snr_db=10*log10(P); w~CN(0,1); unit mean power (paper-sum: unit total power)"


def base_metadata(**extra) -> dict:
    meta = {
        "generator": GENERATOR_ID,
        "snr_convention": SNR_CONVENTION,
        "sqrt_p_restored": "true",
        "subset_argument": "derived",
    }
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], metadata: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_text(path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise HarnessError(f"cannot write {path}: {exc.strerror}", code="IO_ERROR") from exc


def read_csv(path) -> tuple[dict, list[dict]]:
    """Metadata dict and rows (as string dicts) of a file written by render_csv."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise HarnessError(f"cannot read {path}: {exc.strerror}", code="IO_ERROR") from exc
    meta = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))
