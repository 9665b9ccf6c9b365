"""BPSK/AWGN channel and the deterministic Monte Carlo BER/FER engine.

Per-frame randomness is derived as a pure function of (point seed, frame
index), so results are bit-identical no matter how frames are batched or
distributed.  The stop rule is evaluated on the sequential frame prefix:
with batching, frames past the stop index are computed and discarded, which
keeps counts equal to a strictly sequential run.
"""

from __future__ import annotations

import io
import json
import math
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .codec import LLR_MAX, SuccessiveCancellationDecoder, encode, expand_llrs
from .shortening import CodeSpec

RandomStream = np.random.Generator


@dataclass(frozen=True)
class ChannelParams:
    """AWGN parameters for one Eb/N0 point at a given code rate."""

    ebn0_db: float
    rate: float
    sigma: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not (0 < self.rate <= 1):
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")
        if self.sigma is None:
            var = 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))
            object.__setattr__(self, "sigma", math.sqrt(var))


@dataclass(frozen=True)
class StopRule:
    min_frame_errors: int = 100
    max_frames: int = 1_000_000

    def __post_init__(self):
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be >= 1")


@dataclass
class SimPoint:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    ci95_ber: float
    seed: int
    elapsed: float


@dataclass
class SweepResult:
    spec: CodeSpec
    points: list[SimPoint]
    seed: int


def modulate(bits: np.ndarray) -> np.ndarray:
    """BPSK: bit 0 -> +1.0, bit 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def transmit(x: np.ndarray, sigma: float, stream: RandomStream) -> np.ndarray:
    """Add white Gaussian noise of standard deviation sigma from the stream."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    x = np.asarray(x, dtype=float)
    if sigma == 0.0:
        return x.copy()
    return x + sigma * stream.standard_normal(x.shape)


def channel_llrs(y: np.ndarray, sigma: float) -> np.ndarray:
    """AWGN BPSK LLRs 2y/sigma^2; sigma=0 maps to saturated certainties."""
    y = np.asarray(y, dtype=float)
    if sigma == 0.0:
        return np.where(y >= 0, LLR_MAX, -LLR_MAX)
    return 2.0 * y / (sigma * sigma)


def frame_stream(point_seed: int, frame_index: int) -> RandomStream:
    """Generator for one frame; pure function of its arguments."""
    return np.random.default_rng(np.random.SeedSequence((point_seed, frame_index)))


def run_point(
    spec: CodeSpec,
    ebn0_db: float,
    stop: StopRule | None = None,
    seed: int = 0,
    batch_size: int = 256,
) -> SimPoint:
    """Monte Carlo BER/FER at one Eb/N0 point.

    Each frame draws its message and noise from frame_stream(seed, index),
    message first.  Counts follow sequential-prefix stop semantics, so the
    result does not depend on batch_size.
    """
    stop = stop or StopRule()
    if spec.k == 0:
        raise ValueError("cannot simulate a code with k=0")
    params = ChannelParams(ebn0_db=ebn0_db, rate=spec.rate)
    decoder = SuccessiveCancellationDecoder(spec)
    t0 = time.perf_counter()
    frames = bit_errors = frame_errors = 0
    next_frame = 0
    done = False
    while not done:
        budget = stop.max_frames - next_frame
        if budget <= 0:
            break
        size = min(batch_size, budget)
        msgs = np.empty((size, spec.k), dtype=np.uint8)
        noise_in = np.empty((size, spec.n_short))
        for t in range(size):
            g = frame_stream(seed, next_frame + t)
            msgs[t] = g.integers(0, 2, size=spec.k, dtype=np.uint8)
            noise_in[t] = transmit(np.zeros(spec.n_short), params.sigma, g)
        codewords = encode(msgs, spec)
        y = modulate(codewords) + noise_in
        llrs = expand_llrs(channel_llrs(y, params.sigma), spec)
        msg_hat, _ = decoder.decode(llrs)
        wrong = msg_hat != msgs
        frame_err = wrong.any(axis=1)
        # sequential-prefix stop: truncate the batch at the frame where the
        # error target is reached
        cum = frame_errors + np.cumsum(frame_err)
        hit = np.flatnonzero(cum >= stop.min_frame_errors)
        used = size if hit.size == 0 else int(hit[0]) + 1
        frames += used
        frame_errors += int(frame_err[:used].sum())
        bit_errors += int(wrong[:used].sum())
        next_frame += used
        done = frame_errors >= stop.min_frame_errors or frames >= stop.max_frames
    ber = bit_errors / (frames * spec.k)
    fer = frame_errors / frames
    ci = 1.96 * math.sqrt(max(ber * (1.0 - ber), 0.0) / (frames * spec.k))
    return SimPoint(
        ebn0_db=ebn0_db,
        frames=frames,
        bit_errors=bit_errors,
        frame_errors=frame_errors,
        ber=ber,
        fer=fer,
        ci95_ber=ci,
        seed=seed,
        elapsed=time.perf_counter() - t0,
    )


def run_sweep(
    spec: CodeSpec,
    ebn0_list: list[float],
    stop: StopRule | None = None,
    seed: int = 0,
    batch_size: int = 256,
) -> SweepResult:
    """One point per Eb/N0 value; point seeds are seed + point index."""
    if not ebn0_list:
        raise ValueError("ebn0_list must be non-empty")
    points = [
        run_point(spec, ebn0, stop, seed=seed + j, batch_size=batch_size)
        for j, ebn0 in enumerate(ebn0_list)
    ]
    return SweepResult(spec=spec, points=points, seed=seed)


CSV_COLUMNS = "ebn0_db,frames,bit_errors,frame_errors,ber,fer,ci95_ber,seed"


def points_to_csv(points: list[SimPoint], header_lines: list[str] | None = None) -> str:
    """Sweep CSV; header comment lines carry run provenance."""
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    buf.write(CSV_COLUMNS + "\n")
    for p in points:
        buf.write(
            f"{p.ebn0_db!r},{p.frames},{p.bit_errors},{p.frame_errors},"
            f"{p.ber!r},{p.fer!r},{p.ci95_ber!r},{p.seed}\n"
        )
    return buf.getvalue()


def _point_fields(p: SimPoint) -> dict:
    d = asdict(p)
    d.pop("elapsed")  # wall-clock time would break byte-identical reruns
    return d


def sweep_to_json(result: SweepResult, provenance: dict | None = None) -> str:
    """JSON mirror of the CSV plus the full code specification."""
    spec = result.spec
    obj = {
        "provenance": provenance or {},
        "seed": result.seed,
        "code": {
            "n": spec.n,
            "n_short": spec.n_short,
            "k": spec.k,
            "design_snr_db": spec.design_snr_db,
            "method": spec.pattern.method,
            "pattern": list(spec.pattern.indices),
            "info_set": list(spec.info_set),
            "frozen_set": list(spec.frozen_set),
        },
        "points": [_point_fields(p) for p in result.points],
    }
    return json.dumps(obj, indent=2, sort_keys=True)
