"""Dataset type, CSV ingestion and shared numeric helpers."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

try:
    from .errors import ContractViolation, DataIngestionError
except ImportError:
    from errors import ContractViolation, DataIngestionError

LabelColumn = Optional[Union[str, int]]

_LINE_PATTERN = re.compile(r"line (\d+)")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class DataSet:
    """N points in l dimensions, optionally with 1-based ground-truth classes."""

    points: np.ndarray
    truth: Optional[np.ndarray] = None
    name: str = "data"
    # Generator means for synthetic sets; None for real data.
    centers: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise ContractViolation(f"DataSet '{self.name}' needs an N x l matrix with N, l >= 1, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            bad = int(np.flatnonzero(~np.all(np.isfinite(points), axis=1))[0])
            raise ContractViolation(f"DataSet '{self.name}' has a non-finite coordinate in point {bad}")
        object.__setattr__(self, "points", _frozen(points))

        if self.truth is not None:
            truth = np.asarray(self.truth)
            if truth.shape != (points.shape[0],):
                raise ContractViolation(
                    f"DataSet '{self.name}': truth has shape {truth.shape}, expected ({points.shape[0]},)"
                )
            if not np.issubdtype(truth.dtype, np.integer):
                if not np.all(np.equal(np.mod(truth, 1), 0)):
                    raise ContractViolation(f"DataSet '{self.name}': truth labels must be integers")
                truth = truth.astype(np.int64)
            classes = np.unique(truth)
            if classes[0] != 1 or not np.array_equal(classes, np.arange(1, classes.size + 1)):
                raise ContractViolation(
                    f"DataSet '{self.name}': truth classes must be contiguous from 1, got {classes.tolist()}"
                )
            object.__setattr__(self, "truth", _frozen(truth.astype(np.int64)))

        if self.centers is not None:
            centers = np.asarray(self.centers, dtype=np.float64).reshape(-1, points.shape[1])
            object.__setattr__(self, "centers", _frozen(centers))

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return 0 if self.truth is None else int(self.truth.max())


def squared_distance(x, y) -> float:
    """Squared Euclidean distance between two vectors of equal length."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ContractViolation(f"Length mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return float(np.sum(diff * diff))


def bounding_box(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    points = np.asarray(points, dtype=np.float64)
    return points.min(axis=0), points.max(axis=0)


def data_diameter(points: np.ndarray) -> float:
    """Length of the diagonal of the axis-aligned bounding box of the points."""
    low, high = bounding_box(points)
    return float(np.linalg.norm(high - low))


def _resolve_label_column(columns: list, label_column: LabelColumn, has_header: bool) -> Optional[int]:
    if label_column is None:
        return None
    if isinstance(label_column, int):
        index = label_column if label_column >= 0 else len(columns) + label_column
        if not 0 <= index < len(columns):
            raise DataIngestionError(f"Label column index {label_column} out of range for {len(columns)} columns")
        return index
    if label_column == "last":
        return len(columns) - 1
    if not has_header:
        raise DataIngestionError(f"Label column '{label_column}' selected by name but the file has no header row")
    names = [str(name).strip() for name in columns]
    if label_column not in names:
        raise DataIngestionError(f"Label column '{label_column}' not found. Available: [{', '.join(names)}]")
    return names.index(label_column)


def _parse_points(cells: pd.DataFrame, first_line: int) -> np.ndarray:
    raw = cells.to_numpy(dtype=object)
    try:
        points = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError):
        points = None

    if points is None or not np.all(np.isfinite(points)):
        for row_index, row in enumerate(raw):
            line = first_line + row_index
            for value in row:
                if not isinstance(value, str):
                    raise DataIngestionError("wrong number of fields", row=line)
                try:
                    number = float(value)
                except ValueError:
                    raise DataIngestionError(f"cannot parse '{value}' as a real number", row=line) from None
                if not np.isfinite(number):
                    raise DataIngestionError(f"non-finite value '{value}'", row=line)
    return points


def load_csv(path: Union[str, Path], has_header: bool = False, label_column: LabelColumn = None) -> DataSet:
    """Read a comma-separated file into a DataSet.

    Args:
        path: CSV file, '.' as decimal point, no thousands separators.
        has_header: Whether the first row holds column names.
        label_column: None, "last", a header name or a column index. The
            selected column becomes ``truth`` with classes re-indexed 1..K in
            order of first appearance.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise DataIngestionError(f"Empty file: {path}") from None
    except UnicodeDecodeError:
        raise DataIngestionError(f"{path} is not valid UTF-8 text") from None
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        row = int(match.group(1)) if match else None
        raise DataIngestionError("wrong number of fields", row=row) from None

    if frame.shape[0] == 0:
        raise DataIngestionError(f"No data rows in {path}")

    first_line = 2 if has_header else 1
    label_index = _resolve_label_column(list(frame.columns), label_column, has_header)

    truth = None
    if label_index is not None:
        labels = frame.iloc[:, label_index]
        if labels.isna().any():
            row = int(np.flatnonzero(labels.isna().to_numpy())[0]) + first_line
            raise DataIngestionError("wrong number of fields", row=row)
        codes, _ = pd.factorize(labels, sort=False)
        truth = codes.astype(np.int64) + 1
        frame = frame.drop(columns=frame.columns[label_index])

    if frame.shape[1] == 0:
        raise DataIngestionError(f"No feature columns in {path}")

    points = _parse_points(frame, first_line)
    return DataSet(points=points, truth=truth, name=path.stem)


def write_csv(dataset: DataSet, path: Union[str, Path]) -> Path:
    """Write a DataSet with a header row; truth (if any) goes to a final 'label' column.

    ``load_csv(path, has_header=True, label_column="label")`` re-reads the same points.
    """
    path = Path(path)
    frame = pd.DataFrame(dataset.points, columns=[f"x{k + 1}" for k in range(dataset.dim)])
    if dataset.truth is not None:
        frame["label"] = dataset.truth
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def load_iris_dataset() -> DataSet:
    """The Iris data bundled with scikit-learn: 150 points, 4 features, 3 classes of 50."""
    from sklearn.datasets import load_iris

    bunch = load_iris()
    return DataSet(points=bunch.data, truth=bunch.target + 1, name="iris")


NEW_THYROID_PATH = Path(__file__).resolve().parent.parent / "data" / "new-thyroid.csv"


def load_new_thyroid_dataset(path: Union[str, Path, None] = None) -> DataSet:
    """New Thyroid (215 points, 5 features, classes of 150/35/30), class label in the first column.

    Not redistributed with scikit-learn; place the UCI ``new-thyroid.data`` file
    at ``skills/apcm/data/new-thyroid.csv`` or pass its location.
    """
    dataset = load_csv(path or NEW_THYROID_PATH, has_header=False, label_column=0)
    return replace(dataset, name="new-thyroid")
