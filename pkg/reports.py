import json
import logging
from fractions import Fraction
from typing import Dict, Mapping, Optional

import numpy as np
import pandas as pd

from config import OUTPUT_CONFIG
from errors import UsageError
from exact_linear import format_scalar
from mr_algebra import AlgebraContext, AlgebraElement

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def document_meta(n: int, characteristic: int, seed: int, **extra) -> Dict:
    meta = {"n": n, "char": characteristic, "seed": seed, "version": OUTPUT_CONFIG["VERSION"]}
    meta.update(extra)
    return meta


def json_scalar(value):
    """Integers stay numbers, other rationals become "a/b" strings"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else format_scalar(value)
    return value


def _text_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, str):
        return value
    if value == 0:
        return OUTPUT_CONFIG["ZERO_SYMBOL"]
    return format_scalar(value)


def matrix_document(frame: pd.DataFrame, meta: Mapping) -> Dict:
    return {
        "labels": {"rows": [str(label) for label in frame.index], "columns": [str(label) for label in frame.columns]},
        "entries": [[json_scalar(v) for v in row] for row in frame.to_numpy(dtype=object)],
        "meta": dict(meta),
    }


def matrix_from_document(document: Mapping) -> pd.DataFrame:
    rows = [[Fraction(v) if isinstance(v, str) else v for v in row] for row in document["entries"]]
    return pd.DataFrame(rows, index=document["labels"]["rows"], columns=document["labels"]["columns"])


def element_document(element: AlgebraElement, meta: Mapping, basis: str = "x") -> Dict:
    coords = element.to_dict(basis)
    return {
        "labels": list(coords),
        "entries": {C: json_scalar(Fraction(value)) for C, value in coords.items()},
        "meta": {**meta, "basis": basis},
    }


def element_from_document(document: Mapping, context: AlgebraContext) -> AlgebraElement:
    if document["meta"].get("basis", "x") != "x":
        raise UsageError("Only documents in the x basis can be read back")
    return context.from_dict({C: Fraction(str(value)) for C, value in document["entries"].items()})


def element_frame(element: AlgebraElement, basis: str = "x") -> pd.DataFrame:
    coords = element.to_dict(basis)
    frame = pd.DataFrame({"coefficient": list(coords.values())}, index=list(coords))
    frame.index.name = "composition"
    return frame


def report_document(report: Mapping, meta: Mapping) -> Dict:
    return {"labels": list(report), "entries": _jsonable(report), "meta": dict(meta)}


def _jsonable(value):
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, pd.DataFrame):
        return matrix_document(value, {})
    return json_scalar(value)


def render_table(frame: pd.DataFrame, fmt: str, meta: Optional[Mapping] = None) -> str:
    """Text with "." for zeros, CSV, or the JSON matrix document"""
    if fmt == "text":
        return frame.map(_text_cell).to_string()
    if fmt == "csv":
        return frame.to_csv()
    if fmt == "json":
        return dumps(matrix_document(frame, meta or {}))
    raise UsageError(f"Unknown format '{fmt}', expected one of {', '.join(OUTPUT_CONFIG['FORMATS'])}")


def render_report(report: Mapping, fmt: str, meta: Optional[Mapping] = None) -> str:
    if fmt == "json":
        return dumps(report_document(report, meta or {}))
    flat = _jsonable(report)
    if fmt == "csv":
        frame = pd.DataFrame({"value": [json.dumps(v, ensure_ascii=False) for v in flat.values()]}, index=list(flat))
        frame.index.name = "key"
        return frame.to_csv()
    if fmt == "text":
        return "\n".join(f"{key}: {json.dumps(value, ensure_ascii=False)}" for key, value in flat.items())
    raise UsageError(f"Unknown format '{fmt}', expected one of {', '.join(OUTPUT_CONFIG['FORMATS'])}")


def dumps(document: Mapping) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2)
