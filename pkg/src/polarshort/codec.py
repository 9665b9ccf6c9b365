"""Polar encoding and LLR-domain successive cancellation decoding.

Encoding applies the Kronecker-power butterfly directly to the public-order
input vector; no explicit bit-reversal matrix appears anywhere.  The decoder
runs the standard halves recursion on the bit-reversal-permuted LLR vector so
that its decision schedule matches the reliabilities the construction module
assigns to public channel indices.  All array ops accept a batch axis.
"""

from __future__ import annotations

import numpy as np

from .construction import bitrev_permutation
from .shortening import CodeSpec, reduce_generator

# Large enough that tanh(LLR_MAX/2) rounds to 1.0 in double precision, small
# enough that sums over a decoding path stay far from overflow.
LLR_MAX = 100.0


def bit_reverse(n: int) -> np.ndarray:
    """0-based bit-reversal permutation of {0..n-1}."""
    return bitrev_permutation(n)


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Multiply by the Kronecker-power matrix over GF(2); involutive.

    Works on the last axis; accepts a single vector or a batch of rows.
    """
    u = np.asarray(u)
    n = u.shape[-1]
    if n < 1 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    out = u.astype(np.uint8).copy()
    width = n
    while width > 1:
        half = width // 2
        blocks = out.reshape(u.shape[:-1] + (n // width, width))
        blocks[..., :half] ^= blocks[..., half:]
        width = half
    return out


def encode(msg: np.ndarray, spec: CodeSpec) -> np.ndarray:
    """Encode message bits into the shortened codeword (length n').

    Information bits land on the info set in ascending index order; frozen and
    shortened inputs are zero.  The shortened code positions are asserted to
    come out zero before being stripped.
    """
    msg = np.asarray(msg, dtype=np.uint8)
    batched = msg.ndim == 2
    rows = msg.shape[0] if batched else 1
    if msg.shape[-1] != spec.k:
        raise ValueError(f"message length {msg.shape[-1]} != k={spec.k}")
    u = np.zeros((rows, spec.n), dtype=np.uint8)
    info = np.asarray(spec.info_set, dtype=np.int64) - 1
    if spec.k:
        u[:, info] = msg.reshape(rows, spec.k)
    c = polar_transform(u)
    removed = np.asarray(spec.pattern.indices, dtype=np.int64) - 1
    if removed.size and c[:, removed].any():
        raise AssertionError(
            "shortened code positions are non-zero; pattern is not valid"
        )
    keep = _kept_positions(spec)
    out = c[:, keep]
    return out if batched else out[0]


def _kept_positions(spec: CodeSpec) -> np.ndarray:
    removed = set(spec.pattern.indices)
    return np.array([i for i in range(spec.n) if i + 1 not in removed], dtype=np.int64)


def expand_llrs(
    channel_llrs: np.ndarray, spec: CodeSpec, llr_max: float = LLR_MAX
) -> np.ndarray:
    """Spread n' channel LLRs over the mother length, +llr_max at shortened
    positions, saturating everything to [-llr_max, llr_max]."""
    channel_llrs = np.asarray(channel_llrs, dtype=float)
    batched = channel_llrs.ndim == 2
    rows = channel_llrs.shape[0] if batched else 1
    if channel_llrs.shape[-1] != spec.n_short:
        raise ValueError(
            f"expected {spec.n_short} channel LLRs, got {channel_llrs.shape[-1]}"
        )
    full = np.full((rows, spec.n), llr_max)
    keep = _kept_positions(spec)
    full[:, keep] = np.clip(channel_llrs.reshape(rows, -1), -llr_max, llr_max)
    return full if batched else full[0]


def _boxplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact check-node combine 2*atanh(tanh(a/2)*tanh(b/2)).

    Evaluated as min-sum plus the two log-domain correction terms, which never
    produces an infinity regardless of operand magnitude.
    """
    abs_a = np.abs(a)
    abs_b = np.abs(b)
    r = np.sign(a) * np.sign(b) * np.minimum(abs_a, abs_b)
    r += np.log1p(np.exp(-(abs_a + abs_b)))
    r -= np.log1p(np.exp(-np.abs(abs_a - abs_b)))
    return r


class SuccessiveCancellationDecoder:
    """LLR-domain SC decoder for one CodeSpec.

    Holds per-depth scratch buffers, so one instance must not be shared by
    concurrent calls; independent instances are fine.  Decoding is a
    deterministic function of the input LLRs.
    """

    def __init__(self, spec: CodeSpec):
        self.spec = spec
        self.n = spec.n
        self.levels = spec.n.bit_length() - 1
        self._rev = bitrev_permutation(spec.n)
        frozen = np.ones(spec.n, dtype=bool)
        info = np.asarray(spec.info_set, dtype=np.int64) - 1
        frozen[info] = False
        self._frozen_sched = frozen[self._rev]  # frozen flags in decode order
        self._info = info
        self._batch = 0
        self._llr_buf: list[np.ndarray] = []
        self._bit_buf: list[np.ndarray] = []

    def _ensure_buffers(self, batch: int):
        if batch != self._batch:
            self._llr_buf = [
                np.empty((batch, self.n >> d)) for d in range(self.levels + 1)
            ]
            self._bit_buf = [
                np.empty((batch, self.n >> d), dtype=np.uint8)
                for d in range(self.levels + 1)
            ]
            self._batch = batch

    def decode(self, llrs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (msg_hat, u_hat) for mother-length LLR vector(s)."""
        llrs = np.asarray(llrs, dtype=float)
        batched = llrs.ndim == 2
        rows = llrs.shape[0] if batched else 1
        if llrs.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} LLRs, got {llrs.shape[-1]}")
        if np.isnan(llrs).any():
            raise ValueError("LLR vector contains NaN")
        self._ensure_buffers(rows)
        self._llr_buf[0][:] = llrs.reshape(rows, self.n)[:, self._rev]
        u_sched = np.empty((rows, self.n), dtype=np.uint8)
        self._descend(0, 0, u_sched, genie=None)
        u_hat = u_sched[:, self._rev]
        msg_hat = u_hat[:, self._info] if self.spec.k else np.zeros((rows, 0), np.uint8)
        if not batched:
            return msg_hat[0], u_hat[0]
        return msg_hat, u_hat

    def _descend(self, depth: int, base: int, u_sched: np.ndarray, genie):
        width = self.n >> depth
        if width == 1:
            leaf = self._bit_buf[depth]
            if self._frozen_sched[base]:
                leaf[:, 0] = 0
                u_sched[:, base] = 0
            else:
                # tie at exactly 0 decodes to 0
                leaf[:, 0] = self._llr_buf[depth][:, 0] < 0.0
                u_sched[:, base] = leaf[:, 0]
            if genie is not None:
                leaf[:, 0] = genie[:, base]
            return
        half = width >> 1
        a = self._llr_buf[depth][:, :half]
        b = self._llr_buf[depth][:, half:]
        self._llr_buf[depth + 1][:] = _boxplus(a, b)
        self._descend(depth + 1, base, u_sched, genie)
        left = self._bit_buf[depth][:, :half]
        left[:] = self._bit_buf[depth + 1]
        self._llr_buf[depth + 1][:] = b + (1.0 - 2.0 * left) * a
        self._descend(depth + 1, base + half, u_sched, genie)
        left ^= self._bit_buf[depth + 1]
        self._bit_buf[depth][:, half:] = self._bit_buf[depth + 1]

    def genie_decisions(self, llrs: np.ndarray, u_true: np.ndarray) -> np.ndarray:
        """Per-position raw decisions with all partial sums fed from u_true.

        Test instrumentation for per-channel reliability measurements; returns
        the decision array in public order.
        """
        llrs = np.asarray(llrs, dtype=float)
        rows = llrs.shape[0] if llrs.ndim == 2 else 1
        self._ensure_buffers(rows)
        self._llr_buf[0][:] = llrs.reshape(rows, self.n)[:, self._rev]
        u_sched = np.empty((rows, self.n), dtype=np.uint8)
        genie = np.asarray(u_true, dtype=np.uint8).reshape(rows, self.n)[:, self._rev]
        saved = self._frozen_sched
        self._frozen_sched = np.zeros(self.n, dtype=bool)
        try:
            self._descend(0, 0, u_sched, genie=genie)
        finally:
            self._frozen_sched = saved
        return u_sched[:, self._rev]


def sc_decode(llrs: np.ndarray, spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """One-shot SC decode; see SuccessiveCancellationDecoder for reuse."""
    return SuccessiveCancellationDecoder(spec).decode(llrs)


def ml_decode(llrs: np.ndarray, spec: CodeSpec) -> np.ndarray:
    """Exhaustive maximum-likelihood decoding by codebook correlation.

    Maximizes sum((1-2c)*llr) over the transmitted positions; ties go to the
    lexicographically smallest message.  Exponential in k, capped at 16.
    """
    if spec.k > 16:
        raise ValueError(f"ml_decode enumerates 2^k codewords; k={spec.k} > 16")
    llrs = np.asarray(llrs, dtype=float)
    batched = llrs.ndim == 2
    rows = llrs.shape[0] if batched else 1
    if llrs.shape[-1] != spec.n:
        raise ValueError(f"expected mother-length ({spec.n}) LLR vector")
    keep = _kept_positions(spec)
    count = 1 << spec.k
    # messages in lexicographic order: bit 0 of the message is the MSB
    msgs = ((np.arange(count)[:, None] >> np.arange(spec.k - 1, -1, -1)[None, :]) & 1).astype(np.uint8)
    book = encode(msgs, spec)
    signs = 1.0 - 2.0 * book.astype(float)  # (2^k, n')
    metrics = llrs.reshape(rows, spec.n)[:, keep] @ signs.T  # (rows, 2^k)
    best = np.argmax(metrics, axis=1)  # first maximum = smallest message
    out = msgs[best]
    return out if batched else out[0]


def encode_via_reduced_matrix(msg: np.ndarray, spec: CodeSpec) -> np.ndarray:
    """Reference encoder using the materialized reduced generator (tests)."""
    msg = np.asarray(msg, dtype=np.uint8)
    reduced = reduce_generator(spec.n, spec.pattern)
    keep = _kept_positions(spec)
    u_short = np.zeros((msg.shape[0] if msg.ndim == 2 else 1, spec.n_short), np.uint8)
    pos_in_short = {int(p) + 1: i for i, p in enumerate(keep)}
    for j, idx in enumerate(spec.info_set):
        u_short[:, pos_in_short[idx]] = msg.reshape(-1, spec.k)[:, j]
    out = (u_short @ reduced) % 2
    return out.astype(np.uint8) if msg.ndim == 2 else out[0].astype(np.uint8)
