"""Shared domain types, validation and the sample CSV format.

Units are fixed: frequencies in GHz, distances in meters, gains in dB.
The 1 GHz log reference means ``log10(f / 1 GHz) == log10(f_ghz)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

C0 = 299_792_458.0  # m/s


class ValidationError(ValueError):
    """Base class for rejected input fields."""


class NonPositiveFrequency(ValidationError):
    pass


class NegativeDistance(ValidationError):
    pass


class NonFiniteGain(ValidationError):
    pass


class UnknownOrientation(ValidationError):
    pass


class EmptyDataset(ValidationError):
    pass


class Orientation(str, enum.Enum):
    HEAD_ON = "headon"
    SIDEWAYS = "sideways"

    @classmethod
    def parse(cls, raw: "str | Orientation") -> "Orientation":
        if isinstance(raw, Orientation):
            return raw
        key = str(raw).strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key:
                return member
        raise UnknownOrientation(f"unknown orientation {raw!r} (expected headon|sideways)")


def check_frequency(f_ghz: float) -> float:
    f = float(f_ghz)
    if not math.isfinite(f) or f <= 0.0:
        raise NonPositiveFrequency(f"frequency must be a positive finite GHz value, got {f_ghz!r}")
    return f


def check_distance(d_m: float) -> float:
    d = float(d_m)
    if not math.isfinite(d) or d < 0.0:
        raise NegativeDistance(f"distance must be a non-negative finite value in m, got {d_m!r}")
    return d


def check_gain(bg_db: float) -> float:
    g = float(bg_db)
    if not math.isfinite(g):
        raise NonFiniteGain(f"gain must be finite, got {bg_db!r}")
    return g


def wavelength_m(f_ghz: float) -> float:
    return C0 / (check_frequency(f_ghz) * 1e9)


@dataclass(frozen=True)
class BlockageSample:
    """One blockage-gain observation at a (frequency, distance) point."""

    f_ghz: float
    d_m: float
    subject: str
    orientation: Orientation
    bg_db: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "f_ghz", check_frequency(self.f_ghz))
        object.__setattr__(self, "d_m", check_distance(self.d_m))
        object.__setattr__(self, "orientation", Orientation.parse(self.orientation))
        object.__setattr__(self, "bg_db", check_gain(self.bg_db))
        object.__setattr__(self, "subject", str(self.subject))


def validate_sample(
    f_ghz: float,
    d_m: float,
    orientation: str | Orientation,
    bg_db: float,
    subject: str = "s1",
) -> BlockageSample:
    """Build a sample from raw fields, raising a field-specific ``ValidationError``."""
    return BlockageSample(f_ghz, d_m, subject, orientation, bg_db)


@dataclass(frozen=True)
class Dataset:
    samples: tuple[BlockageSample, ...]
    provenance: str = ""

    def __init__(self, samples: Iterable[BlockageSample], provenance: str = "") -> None:
        object.__setattr__(self, "samples", tuple(samples))
        object.__setattr__(self, "provenance", provenance)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[BlockageSample]:
        return iter(self.samples)

    def require_nonempty(self) -> None:
        if not self.samples:
            raise EmptyDataset("dataset has no samples")

    # column views, used by the fitting and analysis code
    @property
    def f(self) -> list[float]:
        return [s.f_ghz for s in self.samples]

    @property
    def d(self) -> list[float]:
        return [s.d_m for s in self.samples]

    @property
    def bg(self) -> list[float]:
        return [s.bg_db for s in self.samples]

    def with_bg(self, values: Sequence[float], provenance: str | None = None) -> "Dataset":
        """Same sample layout with the responses replaced."""
        if len(values) != len(self.samples):
            raise ValueError("length mismatch")
        new = [
            BlockageSample(s.f_ghz, s.d_m, s.subject, s.orientation, v)
            for s, v in zip(self.samples, values)
        ]
        return Dataset(new, self.provenance if provenance is None else provenance)


CSV_HEADER = ("f_ghz", "d_m", "subject", "orientation", "bg_db")


def dataset_to_csv(data: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in data:
        writer.writerow([repr(s.f_ghz), repr(s.d_m), s.subject, s.orientation.value, repr(s.bg_db)])
    return buf.getvalue()


def dataset_from_csv(text: str, provenance: str = "") -> Dataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("empty CSV") from None
    header = [h.strip() for h in header]
    if tuple(header) != CSV_HEADER:
        raise ValidationError(f"bad header {header!r}, expected {','.join(CSV_HEADER)}")
    samples = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(CSV_HEADER):
            raise ValidationError(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        f, d, subject, orient, bg = (c.strip() for c in row)
        try:
            samples.append(validate_sample(float(f), float(d), orient, float(bg), subject))
        except ValidationError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    return Dataset(samples, provenance)


def read_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    return dataset_from_csv(path.read_text(encoding="utf-8"), provenance=str(path))


def write_dataset(data: Dataset, path: str | Path) -> None:
    Path(path).write_text(dataset_to_csv(data), encoding="utf-8")
