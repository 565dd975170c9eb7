"""Weight model files: a versioned JSON document holding everything needed
to score new inputs against one corpus without the corpus itself.

Only nonzero weights are stored. Floats are written with Python's shortest
round-trip representation (at most 17 significant digits), so
``load(save(model))`` reproduces every real exactly.
"""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .core import FunctionSet, IndexSet, RelweightsError, WeightVector
from .corpus import TokenizerConfig
from .simplex import Kind
from .weights import DualityReport, WeightSolution

FORMAT_VERSION = 1
LOAD_SUM_TOL = 1e-8


class UnreadableModel(RelweightsError):
    pass


@dataclass
class WeightModel:
    corpus_id: str
    supporting: WeightSolution
    covering: WeightSolution
    hat_alphas: tuple[float, float] = (float("nan"), float("nan"))
    tokenizer_config: Optional[TokenizerConfig] = None
    verification: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def vocabulary(self) -> IndexSet:
        return self.supporting.primal.index_set

    @property
    def doc_ids(self) -> IndexSet:
        return self.supporting.dual.index_set

    @classmethod
    def from_report(cls, corpus_id, report: DualityReport, tokenizer_config=None, provenance=None):
        sols = report.solutions
        return cls(
            corpus_id=corpus_id,
            supporting=sols["supporting"],
            covering=sols["covering"],
            hat_alphas=(report.alpha_hat_support, report.alpha_dual),
            tokenizer_config=tokenizer_config,
            verification={
                "gap": report.gap,
                "max_violation": report.max_violation,
                "violations": [list(v) for v in report.slackness_violations],
            },
            provenance=dict(provenance or {}),
        )


def _nonzero(w: WeightVector) -> dict[str, float]:
    return w.as_dict(nonzero_only=True)


def to_dict(model: WeightModel) -> dict:
    sup, cov = model.supporting, model.covering
    return {
        "format_version": FORMAT_VERSION,
        "corpus_id": model.corpus_id,
        "vocabulary": list(model.vocabulary.labels),
        "doc_ids": list(model.doc_ids.labels),
        "alpha_support": sup.alpha,
        "alpha_cover": cov.alpha,
        "alpha_hat_support": model.hat_alphas[0],
        "alpha_hat_cover": model.hat_alphas[1],
        "mean_member_norm": sup.mean_member_norm,
        "supporting_weights": _nonzero(sup.primal),
        "covering_weights": _nonzero(cov.primal),
        "dual_supporting": _nonzero(sup.dual),
        "dual_covering": _nonzero(cov.dual),
        "tight_members_supporting": list(sup.tight_members),
        "tight_members_covering": list(cov.tight_members),
        "tokenizer_config": model.tokenizer_config.to_dict() if model.tokenizer_config else None,
        "verification": model.verification,
        "provenance": model.provenance,
    }


def save(model: WeightModel, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(to_dict(model), indent=1, allow_nan=True)
    path.write_text(text + "\n", encoding="utf-8")


def _expand(index_set: IndexSet, sparse: dict, name: str) -> WeightVector:
    values = np.zeros(len(index_set))
    for label, v in sparse.items():
        if label not in index_set:
            raise UnreadableModel(f"{name}: unknown label {label!r}")
        values[index_set.index(label)] = float(v)
    total = values.sum()
    if abs(total - 1.0) > LOAD_SUM_TOL or np.any(values < 0):
        raise UnreadableModel(f"{name}: weights sum to {total!r}, expected 1")
    # WeightVector itself only accepts sums within 1e-9
    return WeightVector(index_set, values / total if abs(total - 1.0) > 1e-9 else values)


def from_dict(d: dict) -> WeightModel:
    try:
        if d.get("format_version") != FORMAT_VERSION:
            raise UnreadableModel(f"unsupported format_version {d.get('format_version')!r}")
        vocab = IndexSet(d["vocabulary"])
        docs = IndexSet(d["doc_ids"])
        norm = float(d["mean_member_norm"])
        supporting = WeightSolution(
            kind=Kind.SUPPORTING,
            alpha=float(d["alpha_support"]),
            primal=_expand(vocab, d["supporting_weights"], "supporting_weights"),
            dual=_expand(docs, d["dual_supporting"], "dual_supporting"),
            tight_members=list(d.get("tight_members_supporting", [])),
            mean_member_norm=norm,
        )
        covering = WeightSolution(
            kind=Kind.COVERING,
            alpha=float(d["alpha_cover"]),
            primal=_expand(vocab, d["covering_weights"], "covering_weights"),
            dual=_expand(docs, d["dual_covering"], "dual_covering"),
            tight_members=list(d.get("tight_members_covering", [])),
            mean_member_norm=norm,
        )
        cfg = d.get("tokenizer_config")
        return WeightModel(
            corpus_id=str(d["corpus_id"]),
            supporting=supporting,
            covering=covering,
            hat_alphas=(float(d["alpha_hat_support"]), float(d["alpha_hat_cover"])),
            tokenizer_config=TokenizerConfig.from_dict(cfg) if cfg is not None else None,
            verification=dict(d.get("verification", {})),
            provenance=dict(d.get("provenance", {})),
        )
    except UnreadableModel:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise UnreadableModel(f"malformed model: {exc}") from exc


def load(path) -> WeightModel:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UnreadableModel(f"cannot read model {path}: {exc}") from exc
    if not isinstance(d, dict):
        raise UnreadableModel(f"{path}: top level must be an object")
    return from_dict(d)


def read_matrix_tsv(path) -> FunctionSet:
    """Read a TSV: header row of term labels (first cell ignored), one row per member."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter="\t") if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise ValueError(f"{path}: need a header row and at least one data row")
    header = [c.strip() for c in rows[0][1:]]
    members, data = [], []
    for r in rows[1:]:
        if len(r) != len(header) + 1:
            raise ValueError(f"{path}: row {r[0]!r} has {len(r) - 1} values, expected {len(header)}")
        members.append(r[0].strip())
        data.append([float(c) for c in r[1:]])
    return FunctionSet(IndexSet(header), IndexSet(members), np.array(data))


def write_matrix_tsv(fs: FunctionSet, path, corner: str = "id") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow([corner, *fs.domain.labels])
        for label, row in zip(fs.members.labels, fs.matrix):
            w.writerow([label, *(repr(float(v)) for v in row)])


def digest(chunks) -> str:
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(chunk if isinstance(chunk, bytes) else str(chunk).encode("utf-8"))
        h.update(b"\0")
    return "sha256:" + h.hexdigest()


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (
        _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
        if epoch
        else _dt.datetime.now(tz=_dt.timezone.utc)
    )
    return when.replace(microsecond=0).isoformat()
