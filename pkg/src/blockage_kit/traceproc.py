"""Time-trace processing: LoS normalisation, local-mean smoothing, BG extraction.

Also holds the synthetic trace and dataset generators used for closed-loop
checks, since the measured traces are not available.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bgmodels import BgModel, evaluate, sample_chi
from .core import (
    C0,
    BlockageSample,
    Dataset,
    Orientation,
    ValidationError,
    check_frequency,
)

DEFAULT_FS = 100.0
DEFAULT_WINDOW = 16
DEFAULT_THRESHOLD_DB = -6.0
DEFAULT_SPEED = 0.45
SAMPLING_JITTER_S = 1e-9


class WindowTooLong(ValidationError):
    pass


class WindowExceedsTrace(ValidationError):
    pass


class NoBlockageDetected(ValidationError):
    pass


@dataclass(frozen=True)
class TimeTrace:
    samples: np.ndarray  # dB relative to LoS
    fs: float = DEFAULT_FS
    f_ghz: float | None = None
    d_m: float | None = None
    speed: float = DEFAULT_SPEED

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("a trace needs at least 2 samples")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("trace samples must be finite")
        if not (self.fs > 0 and math.isfinite(self.fs)):
            raise ValidationError(f"sampling rate must be > 0, got {self.fs!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.fs

    def replace(self, samples) -> "TimeTrace":
        return TimeTrace(samples, self.fs, self.f_ghz, self.d_m, self.speed)


@dataclass(frozen=True)
class SmoothedTrace:
    trace: TimeTrace
    window: int

    @property
    def samples(self) -> np.ndarray:
        return self.trace.samples


@dataclass(frozen=True)
class BlockageEvent:
    start: int
    end: int  # inclusive
    bg_db: float
    fs: float = DEFAULT_FS

    @property
    def start_s(self) -> float:
        return self.start / self.fs

    @property
    def end_s(self) -> float:
        return self.end / self.fs

    def to_dict(self) -> dict:
        return {"start_s": self.start_s, "end_s": self.end_s, "bg_db": self.bg_db}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def db_to_power(x):
    return np.power(10.0, np.asarray(x, dtype=float) / 10.0)


def power_to_db(p):
    return 10.0 * np.log10(p)


def normalize_to_los(raw: TimeTrace, ref_window: int) -> TimeTrace:
    """Reference the trace to the mean LoS power of its leading and trailing windows."""
    n = len(raw)
    if ref_window < 1:
        raise ValidationError("reference window must be >= 1 sample")
    if 2 * ref_window >= n:
        raise WindowTooLong(f"reference window {ref_window} is not shorter than half of {n} samples")
    x = raw.samples
    ref = np.concatenate([x[:ref_window], x[-ref_window:]])
    level = power_to_db(np.mean(db_to_power(ref)))
    return raw.replace(x - level)


def moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centred running mean; the window is clipped to the available samples at the ends."""
    n = x.size
    right = window - 1 - window // 2
    kernel = np.ones(window)
    sums = np.convolve(x, kernel)[right : right + n]
    counts = np.convolve(np.ones(n), kernel)[right : right + n]
    return sums / counts


def remove_fast_fading(trace: TimeTrace, window: int = DEFAULT_WINDOW) -> SmoothedTrace:
    """Local-mean power over a sliding window, averaged in linear power."""
    if window < 1:
        raise ValidationError("window must be >= 1 sample")
    if window > len(trace):
        raise WindowExceedsTrace(f"window {window} exceeds trace length {len(trace)}")
    if window == 1:
        return SmoothedTrace(trace, 1)
    # factor out the peak level so deep dips keep their precision
    ref = float(np.max(trace.samples))
    p = db_to_power(trace.samples - ref)
    smoothed = power_to_db(moving_average(p, window)) + ref
    # a constant trace must come back unchanged
    smoothed = np.clip(smoothed, trace.samples.min(), trace.samples.max())
    return SmoothedTrace(trace.replace(smoothed), window)


def window_extent_lambda(window: int, fs: float, speed: float, f_ghz: float) -> float:
    """Spatial extent of a ``window``-sample average, in wavelengths.

    Uses ``(window - 1) / fs`` as the window duration (first to last sample).
    """
    if window < 1 or not fs > 0 or not speed > 0:
        raise ValidationError("window, fs and speed must be positive")
    lam = C0 / (check_frequency(f_ghz) * 1e9)
    return (window - 1) / fs * speed / lam


def find_event(smoothed: np.ndarray, threshold_db: float) -> tuple[int, int]:
    i_min = int(np.argmin(smoothed))
    if not smoothed[i_min] < threshold_db:
        raise NoBlockageDetected(
            f"smoothed trace never drops below {threshold_db:g} dB (min {smoothed[i_min]:.2f} dB)"
        )
    below = smoothed < threshold_db
    start = i_min
    while start > 0 and below[start - 1]:
        start -= 1
    end = i_min
    while end < below.size - 1 and below[end + 1]:
        end += 1
    return start, end


def extract_bg(
    trace: TimeTrace,
    window: int = DEFAULT_WINDOW,
    threshold_db: float = DEFAULT_THRESHOLD_DB,
) -> BlockageEvent:
    """Blockage gain: minimum of the fast-fading-free trace inside the event."""
    sm = remove_fast_fading(trace, window).samples
    start, end = find_event(sm, threshold_db)
    return BlockageEvent(start, end, float(sm[start : end + 1].min()), trace.fs)


# --- trace CSV --------------------------------------------------------------


def trace_to_csv(trace: TimeTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_s", "gain_db"])
    for t, g in zip(trace.t, trace.samples):
        w.writerow([f"{t:.9f}", repr(float(g))])
    return buf.getvalue()


def trace_from_csv(text: str, **meta) -> TimeTrace:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["t_s", "gain_db"]:
        raise ValidationError("trace CSV must start with header t_s,gain_db")
    body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
    try:
        t = np.array([float(r[0]) for r in body])
        g = np.array([float(r[1]) for r in body])
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"malformed trace row: {exc}") from None
    if t.size < 2:
        raise ValidationError("a trace needs at least 2 samples")
    dt = np.diff(t)
    step = (t[-1] - t[0]) / (t.size - 1)
    if step <= 0 or np.max(np.abs(dt - step)) > SAMPLING_JITTER_S:
        raise ValidationError("trace sampling is not uniform")
    return TimeTrace(g, fs=1.0 / step, **meta)


def read_trace(path: str | Path, **meta) -> TimeTrace:
    return trace_from_csv(Path(path).read_text(encoding="utf-8"), **meta)


# --- synthetic traces -------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeConfig:
    """Symmetric blockage envelope: flat LoS, raised-cosine ramps, flat floor."""

    depth_db: float = -45.5
    center_s: float = 10.235
    floor_s: float = 0.2  # duration of the flat bottom
    ramp_s: float = 0.4  # duration of each transition

    def __call__(self, t: np.ndarray) -> np.ndarray:
        u = np.abs(np.asarray(t, dtype=float) - self.center_s) - self.floor_s / 2.0
        frac = np.clip(u / self.ramp_s, 0.0, 1.0) if self.ramp_s > 0 else (u > 0).astype(float)
        # 1 on the floor, 0 in LoS
        shape = 0.5 * (1.0 + np.cos(np.pi * frac))
        return self.depth_db * shape


@dataclass(frozen=True)
class FadingConfig:
    """Rician fast fading with unit mean power; ``k_factor_db=None`` disables it."""

    k_factor_db: float | None = 10.0

    def draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.k_factor_db is None or math.isinf(self.k_factor_db):
            return np.zeros(n)
        k = 10.0 ** (self.k_factor_db / 10.0)
        los = math.sqrt(k / (k + 1.0))
        diffuse = math.sqrt(1.0 / (2.0 * (k + 1.0))) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        return power_to_db(np.abs(los + diffuse) ** 2)


@dataclass(frozen=True)
class TraceConfig:
    n_samples: int = 2048
    fs: float = DEFAULT_FS
    f_ghz: float | None = None
    d_m: float | None = None
    speed: float = DEFAULT_SPEED


def synth_trace(
    envelope: Callable[[np.ndarray], np.ndarray],
    fading: FadingConfig,
    rng: np.random.Generator,
    config: TraceConfig = TraceConfig(),
) -> TimeTrace:
    """Envelope (dB) plus independent per-sample fast fading."""
    t = np.arange(config.n_samples) / config.fs
    env = np.asarray(envelope(t), dtype=float)
    x = env + fading.draw(config.n_samples, rng)
    return TimeTrace(x, config.fs, config.f_ghz, config.d_m, config.speed)


# --- synthetic datasets -----------------------------------------------------

PAPER_FREQS_GHZ = tuple(75.0 + 17.5 * i for i in range(9))
PAPER_DISTANCES_M = (1.0, 1.75, 2.5)


@dataclass(frozen=True)
class SynthGrid:
    freqs_ghz: Sequence[float] = PAPER_FREQS_GHZ
    distances_m: Sequence[float] = PAPER_DISTANCES_M
    subjects: Sequence[str] = ("s1", "s2")
    orientations: Sequence[Orientation] = (Orientation.HEAD_ON, Orientation.SIDEWAYS)
    repeats: int = 2  # crossings per subject and orientation

    @property
    def crossings(self) -> int:
        return len(self.subjects) * len(self.orientations) * self.repeats

    def __len__(self) -> int:
        return len(self.freqs_ghz) * len(self.distances_m) * self.crossings


@dataclass(frozen=True)
class Offsets:
    """Additive dB offsets for categorical factors (missing keys mean 0)."""

    orientation: dict = field(default_factory=dict)
    subject: dict = field(default_factory=dict)

    def __call__(self, subject: str, orientation: Orientation) -> float:
        return self.orientation.get(Orientation.parse(orientation), 0.0) + self.subject.get(subject, 0.0)


PAPER_OFFSETS = Offsets(orientation={Orientation.SIDEWAYS: 4.6}, subject={"s2": 7.2})


def synth_dataset(
    truth: BgModel,
    rng: np.random.Generator,
    grid: SynthGrid = SynthGrid(),
    offsets: Offsets = Offsets(),
    sigma_db: float | None = None,
) -> Dataset:
    """Model value + categorical offset + Gaussian residual on a full factorial grid.

    ``sigma_db`` overrides ``truth.sigma_db``; both missing means noiseless.
    """
    sigma = truth.sigma_db if sigma_db is None else sigma_db
    sigma = 0.0 if sigma is None else sigma
    if len(grid) == 0:
        raise ValidationError("synthetic grid is empty")
    samples = []
    for f in grid.freqs_ghz:
        for d in grid.distances_m:
            base = evaluate(truth.params, d, f)
            for subj in grid.subjects:
                for orient in grid.orientations:
                    for _ in range(grid.repeats):
                        bg = base + offsets(subj, orient) + sample_chi(sigma, rng)
                        samples.append(BlockageSample(f, d, subj, orient, bg))
    return Dataset(samples, provenance=f"synthetic {truth.tag} sigma={sigma:g}")
