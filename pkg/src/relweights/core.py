"""Domain types: index sets, weights, nonnegative functions and function sets.

All objects are immutable after construction. Numeric payloads are stored as
read-only float64 numpy arrays so they can be shared between threads freely.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

NORM_TOL = 1e-9


class RelweightsError(Exception):
    """Base class for all errors raised by this package."""


class NegativeValue(RelweightsError, ValueError):
    pass


class NotNormalized(RelweightsError, ValueError):
    pass


class LengthMismatch(RelweightsError, ValueError):
    pass


class IndexSetMismatch(RelweightsError, ValueError):
    pass


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise LengthMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class IndexSet:
    """Ordered set of distinct labels; the order fixes coordinate positions."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise ValueError("an index set needs at least one label")
        if any(label == "" for label in labels):
            raise ValueError("labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_position", {lab: i for i, lab in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._position

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        if len(self.labels) <= 6:
            return f"IndexSet({list(self.labels)!r})"
        return f"IndexSet([{self.labels[0]!r}, ..., {self.labels[-1]!r}], size={len(self)})"

    def index(self, label: str) -> int:
        return self._position[label]

    def subset(self, mask) -> list[str]:
        """Labels at the positions where ``mask`` is true."""
        return [lab for lab, keep in zip(self.labels, mask) if keep]


def _as_index_set(obj) -> IndexSet:
    return obj if isinstance(obj, IndexSet) else IndexSet(obj)


@dataclass(frozen=True, eq=False)
class NonnegFunction:
    """A nonnegative function on a finite index set (no normalization)."""

    index_set: IndexSet
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "index_set", _as_index_set(self.index_set))
        values = _frozen(self.values, 1)
        if values.shape[0] != len(self.index_set):
            raise LengthMismatch(
                f"{values.shape[0]} values for an index set of size {len(self.index_set)}"
            )
        if np.any(values < 0):
            raise NegativeValue("function values must be nonnegative")
        object.__setattr__(self, "values", values)

    @property
    def norm(self) -> float:
        """L1 norm ``|f|``."""
        return float(self.values.sum())

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.index_set.index(label)])

    def support(self, tol: float = 0.0) -> list[str]:
        return self.index_set.subset(self.values > tol)

    def as_dict(self, nonzero_only: bool = False) -> dict[str, float]:
        return {
            lab: float(v)
            for lab, v in zip(self.index_set.labels, self.values)
            if not nonzero_only or v != 0.0
        }


@dataclass(frozen=True, eq=False)
class WeightVector(NonnegFunction):
    """A nonnegative function with unit L1 norm, i.e. a point of the simplex."""

    def __post_init__(self):
        super().__post_init__()
        total = float(self.values.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise NotNormalized(f"weights sum to {total!r}, expected 1")


def make_weight(index_set, values: Sequence[float]) -> WeightVector:
    """Validate ``values`` as a weight on ``index_set``.

    Raises
    ------
    LengthMismatch
        If the number of values differs from the size of the index set.
    NegativeValue
        If any value is negative.
    NotNormalized
        If the values do not sum to one within ``1e-9``.
    """
    return WeightVector(_as_index_set(index_set), values)


def normalized_weight(index_set, values) -> WeightVector:
    """Zero out negative round-off, divide by the sum and wrap as a weight."""
    arr = np.asarray(values, dtype=np.float64).copy()
    arr[arr < 0] = 0.0
    total = arr.sum()
    if total <= 0:
        raise NotNormalized("cannot normalize a vector with zero mass")
    return WeightVector(_as_index_set(index_set), arr / total)


def pairing(x: NonnegFunction, m: NonnegFunction) -> float:
    """Bilinear pairing ``sum_v x(v) * m(v)`` of two functions on the same set."""
    if x.index_set != m.index_set:
        raise IndexSetMismatch("pairing requires both arguments on the same index set")
    return float(np.dot(x.values, m.values))


@dataclass(frozen=True, eq=False)
class FunctionSet:
    """A finite set ``M`` of nonnegative functions on a domain ``V``.

    Stored as a dense ``|M| x |V|`` matrix, one row per member function.
    """

    domain: IndexSet
    members: IndexSet
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "domain", _as_index_set(self.domain))
        object.__setattr__(self, "members", _as_index_set(self.members))
        matrix = _frozen(self.matrix, 2)
        if matrix.shape != (len(self.members), len(self.domain)):
            raise LengthMismatch(
                f"matrix shape {matrix.shape} does not match "
                f"(|M|, |V|) = ({len(self.members)}, {len(self.domain)})"
            )
        if np.any(matrix < 0):
            raise NegativeValue("function set entries must be nonnegative")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_rows(cls, rows, domain=None, members=None) -> "FunctionSet":
        """Build from a nested sequence, inventing labels ``v0.. / m0..`` when omitted."""
        matrix = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        n_rows, n_cols = matrix.shape
        if domain is None:
            domain = [f"v{j}" for j in range(n_cols)]
        if members is None:
            members = [f"m{i}" for i in range(n_rows)]
        return cls(IndexSet(domain), IndexSet(members), matrix)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __len__(self) -> int:
        return len(self.members)

    def member(self, label_or_index: Union[str, int]) -> NonnegFunction:
        i = label_or_index
        if isinstance(i, str):
            i = self.members.index(i)
        return NonnegFunction(self.domain, self.matrix[i])

    def __iter__(self):
        for i in range(len(self.members)):
            yield NonnegFunction(self.domain, self.matrix[i])

    def mean_member_norm(self) -> float:
        return float(self.matrix.sum(axis=1).mean())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionSet):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.members == other.members
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None


def transpose(fs: FunctionSet) -> FunctionSet:
    """Swap roles of domain and members: each ``v`` becomes ``m -> m(v)``."""
    return FunctionSet(fs.members, fs.domain, fs.matrix.T.copy())
