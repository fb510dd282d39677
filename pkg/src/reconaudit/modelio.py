"""Text-document formats for models and datasets.

Both are JSON with a fixed field layout. Thresholds of ``le``/``gt``
conditions are serialized as exact fraction strings (``"23/2"``, ``"13"``) so
parse-then-serialize is the identity on canonical text.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Union

from .domain import (
    AttributeDomain,
    Condition,
    Conjunction,
    DatasetSchema,
    DecisionPath,
    DecisionTreeModel,
    DeterministicDataset,
    Model,
    RuleListModel,
    Value,
)

MODEL_KINDS = ("tree", "rulelist")


class DocumentError(Exception):
    """Raised when a model/dataset document is malformed."""


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

def _domain_to_doc(domain: AttributeDomain) -> dict:
    return {"name": domain.name, "values": list(domain.values)}


def _domain_from_doc(doc: dict) -> AttributeDomain:
    try:
        return AttributeDomain(doc["name"], tuple(doc["values"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad attribute domain: {exc}") from exc


def schema_to_doc(schema: DatasetSchema) -> dict:
    return {
        "attributes": [_domain_to_doc(a) for a in schema.attributes],
        "label": _domain_to_doc(schema.label_domain),
    }


def schema_from_doc(doc: dict) -> DatasetSchema:
    if not isinstance(doc, dict) or "attributes" not in doc or "label" not in doc:
        raise DocumentError("schema document needs 'attributes' and 'label'")
    return DatasetSchema(
        attributes=tuple(_domain_from_doc(d) for d in doc["attributes"]),
        label_domain=_domain_from_doc(doc["label"]),
    )


# ---------------------------------------------------------------------------
# Conditions and paths
# ---------------------------------------------------------------------------

def _condition_to_doc(cond: Condition, schema: DatasetSchema) -> dict:
    value: Union[Value, str]
    if cond.op in ("le", "gt"):
        value = str(cond.value)  # Fraction -> "23/2" or "13"
    else:
        value = cond.value
    return {"attr": schema.attributes[cond.attribute].name, "op": cond.op, "value": value}


def _condition_from_doc(doc: dict, schema: DatasetSchema) -> Condition:
    try:
        attr = schema.attribute_index(doc["attr"])
        op = doc["op"]
        raw = doc["value"]
    except KeyError as exc:
        raise DocumentError(f"condition missing field: {exc}") from exc
    if op in ("le", "gt"):
        try:
            value: Union[Value, Fraction] = Fraction(raw)
        except (ValueError, TypeError) as exc:
            raise DocumentError(f"bad threshold {raw!r}") from exc
    else:
        value = raw
    try:
        return Condition(attr, op, value)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def _path_to_doc(path: DecisionPath, schema: DatasetSchema) -> dict:
    return {
        "conditions": [_condition_to_doc(c, schema) for c in path.conjunction.conditions],
        "prediction": path.prediction,
        "class_counts": list(path.class_counts),
    }


def _path_from_doc(doc: dict, schema: DatasetSchema) -> DecisionPath:
    try:
        conditions = tuple(_condition_from_doc(c, schema) for c in doc["conditions"])
        return DecisionPath(
            conjunction=Conjunction(conditions),
            prediction=doc["prediction"],
            class_counts=tuple(doc["class_counts"]),
        )
    except KeyError as exc:
        raise DocumentError(f"decision path missing field: {exc}") from exc


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

def model_to_doc(model: Model) -> dict:
    return {
        "schema": schema_to_doc(model.schema),
        "model_kind": model.model_kind,
        "paths": [_path_to_doc(p, model.schema) for p in model.paths],
    }


def model_from_doc(doc: dict) -> Model:
    if not isinstance(doc, dict):
        raise DocumentError("model document must be a JSON object")
    kind = doc.get("model_kind")
    if kind not in MODEL_KINDS:
        raise DocumentError(f"model_kind must be one of {MODEL_KINDS}, got {kind!r}")
    schema = schema_from_doc(doc.get("schema"))
    try:
        paths = tuple(_path_from_doc(p, schema) for p in doc["paths"])
    except KeyError as exc:
        raise DocumentError(f"model document missing field: {exc}") from exc
    try:
        if kind == "tree":
            return DecisionTreeModel(schema=schema, branches=paths)
        return RuleListModel(schema=schema, rules=paths)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def model_to_text(model: Model) -> str:
    return dumps_canonical(model_to_doc(model))


def model_from_text(text: str) -> Model:
    return model_from_doc(_loads(text))


def save_model(model: Model, path) -> None:
    write_text_atomic(path, model_to_text(model))


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_text(fh.read())


# ---------------------------------------------------------------------------
# Datasets
# ---------------------------------------------------------------------------

def dataset_to_doc(dataset: DeterministicDataset) -> dict:
    return {
        "schema": schema_to_doc(dataset.schema),
        "rows": [list(row) for row in dataset.rows],
        "labels": list(dataset.labels),
    }


def dataset_from_doc(doc: dict) -> DeterministicDataset:
    if not isinstance(doc, dict):
        raise DocumentError("dataset document must be a JSON object")
    schema = schema_from_doc(doc.get("schema"))
    try:
        return DeterministicDataset(
            schema=schema,
            rows=tuple(tuple(row) for row in doc["rows"]),
            labels=tuple(doc["labels"]),
        )
    except KeyError as exc:
        raise DocumentError(f"dataset document missing field: {exc}") from exc
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def dataset_to_text(dataset: DeterministicDataset) -> str:
    return dumps_canonical(dataset_to_doc(dataset))


def dataset_from_text(text: str) -> DeterministicDataset:
    return dataset_from_doc(_loads(text))


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def dumps_canonical(doc: dict) -> str:
    """Canonical text form: 2-space indent, field order as constructed."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def write_text_atomic(path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partial
    content."""
    path = os.fspath(path)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
