"""
On-disk form of a FieldFlowMatrix.

``matrix_<year>.csv`` holds the non-zero cells as ``citing_field,cited_field,count``
triples in row-major order; ``matrix_<year>.json`` is the sidecar with the field
universe, display names, journal-level totals and the run manifest.
"""
import json
import os
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .errors import InvariantViolation, ParseError
from .flow_matrix import FieldFlowMatrix
from .logger import TradeLogger
from .records import JournalTotals
from .reports import write_csv, write_json
from .utils import file_digest

logger = TradeLogger()

TRIPLE_COLUMNS = ["citing_field", "cited_field", "count"]


class InputDigest(BaseModel):
    path: str
    digest: str


class RunManifest(BaseModel):
    """Provenance embedded in every JSON report."""
    model_config = ConfigDict(frozen=True)

    command: str
    inputs: List[InputDigest] = Field(default_factory=list)
    years: List[int] = Field(default_factory=list)
    counting_mode: str = "multiple"
    unmapped_policy: str = "strict"
    config: Dict[str, Any] = Field(default_factory=dict)
    tool_version: str = __version__
    created_at: str = ""


def build_manifest(
    command: str,
    inputs: Sequence[str],
    years: Sequence[int] = (),
    unmapped_policy: str = "strict",
    config: Optional[Mapping[str, Any]] = None,
) -> RunManifest:
    """Digest every input file and stamp the run."""
    return RunManifest(
        command=command,
        inputs=[InputDigest(path=str(p), digest=file_digest(p)) for p in inputs],
        years=sorted(set(years)),
        unmapped_policy=str(unmapped_policy),
        config=dict(config or {}),
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


@dataclass(frozen=True)
class MatrixArchive:
    matrix: FieldFlowMatrix
    display_names: Dict[str, str]
    totals: Optional[JournalTotals]
    skipped_edges: int
    manifest: Dict[str, Any]
    path: str


def archive_paths(directory: str, year: int) -> Tuple[str, str]:
    stem = os.path.join(directory, f"matrix_{year}")
    return f"{stem}.csv", f"{stem}.json"


def _sidecar_path(csv_path: str) -> str:
    root, _ = os.path.splitext(csv_path)
    return f"{root}.json"


def write_matrix_archive(
    matrix: FieldFlowMatrix,
    directory: str,
    manifest: RunManifest,
    totals: Optional[JournalTotals] = None,
    display_names: Optional[Mapping[str, str]] = None,
) -> Tuple[str, str]:
    csv_path, json_path = archive_paths(directory, matrix.year)
    rows, cols = np.nonzero(matrix.cells)
    triples = pd.DataFrame(
        {
            "citing_field": [matrix.fields[i] for i in rows],
            "cited_field": [matrix.fields[j] for j in cols],
            "count": matrix.cells[rows, cols].astype(np.int64),
        },
        columns=TRIPLE_COLUMNS,
    )
    write_csv(triples, csv_path)
    write_json(
        {
            "year": matrix.year,
            "fields": list(matrix.fields),
            "display_names": {f: (display_names or {}).get(f, f) for f in matrix.fields},
            "cell_sum": matrix.total(),
            "skipped_edges": len(matrix.skipped),
            "journal_totals": asdict(totals) if totals is not None else None,
            "manifest": manifest.model_dump(mode="json"),
        },
        json_path,
    )
    return csv_path, json_path


def _load_sidecar(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            sidecar = json.load(handle)
    except FileNotFoundError:
        raise ParseError("archive sidecar not found", source=path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, source=path) from None
    except UnicodeDecodeError:
        raise ParseError("not valid UTF-8", source=path) from None
    missing = [k for k in ("year", "fields") if k not in sidecar]
    if missing:
        raise ParseError(f"archive sidecar lacks {', '.join(missing)}", source=path)
    return sidecar


def read_matrix_archive(csv_path: str) -> MatrixArchive:
    """Load a matrix archive written by :func:`write_matrix_archive`."""
    sidecar = _load_sidecar(_sidecar_path(csv_path))
    fields = [str(f) for f in sidecar["fields"]]
    try:
        triples = pd.read_csv(
            csv_path,
            dtype={"citing_field": str, "cited_field": str},
            keep_default_na=False,
        )
    except FileNotFoundError:
        raise ParseError("file not found", source=csv_path) from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as exc:
        raise ParseError(f"cannot read archive: {exc}", source=csv_path) from None
    if list(triples.columns) != TRIPLE_COLUMNS:
        raise ParseError(f"expected header {','.join(TRIPLE_COLUMNS)}", line=1, source=csv_path)

    index = {f: k for k, f in enumerate(fields)}
    cells = np.zeros((len(fields), len(fields)), dtype=np.int64)
    for line, (citing, cited, count) in enumerate(triples.itertuples(index=False), start=2):
        if citing not in index or cited not in index:
            raise ParseError(f"field outside the archive universe: {citing!r} -> {cited!r}", line=line, source=csv_path)
        try:
            cells[index[citing], index[cited]] += int(count)
        except (TypeError, ValueError):
            raise ParseError(f"invalid count {count!r}", line=line, source=csv_path) from None

    matrix = FieldFlowMatrix(year=int(sidecar["year"]), fields=tuple(fields), cells=cells)
    expected = sidecar.get("cell_sum")
    if expected is not None and int(expected) != matrix.total():
        raise InvariantViolation(
            f"{csv_path}: cell sum {matrix.total()} does not match sidecar total {expected}"
        )
    totals = sidecar.get("journal_totals")
    logger.log_parsed("archive", csv_path, len(triples), matrix.dimension)
    return MatrixArchive(
        matrix=matrix,
        display_names=dict(sidecar.get("display_names") or {}),
        totals=JournalTotals(**totals) if totals else None,
        skipped_edges=int(sidecar.get("skipped_edges", 0)),
        manifest=dict(sidecar.get("manifest") or {}),
        path=csv_path,
    )

