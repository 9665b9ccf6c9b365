"""Gaussian-approximation reliability construction for polar codes.

Tracks the mean of the all-zero-codeword LLR distribution through the
polarization recursion and ranks the synthetic channels.  Channel indices in
the public API are 1-based rows of the (non-bit-reversed) Kronecker-power
generator matrix; the recursion itself runs in polarization order, which
differs from the public order by the bit-reversal permutation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

# Boundary value of the first branch at x = 10; the second branch takes over
# above it with a small upward jump (artifact of the approximation, kept as-is).
_A, _B, _C = -0.4527, 0.86, 0.0218
PHI_AT_10 = float(np.exp(_A * 10.0**_B + _C))
PHI_AT_0 = float(np.exp(_C))


def initial_mean_from_snr(design_snr_db: float) -> float:
    """LLR mean 2/sigma^2 of the design channel, with sigma^2 = 10^(-S/10).

    Design SNR 0 dB gives mean 2.0.
    """
    return 2.0 * 10.0 ** (design_snr_db / 10.0)


@dataclass(frozen=True)
class GaParams:
    """Parameters of one GA construction run."""

    design_snr_db: float = 0.0
    initial_mean: float = field(default=None)  # type: ignore[assignment]
    inversion_tolerance: float = 1e-12

    def __post_init__(self):
        if self.initial_mean is None:
            object.__setattr__(
                self, "initial_mean", initial_mean_from_snr(self.design_snr_db)
            )
        if not self.initial_mean > 0:
            raise ValueError(f"initial_mean must be positive, got {self.initial_mean}")
        if not (0 < self.inversion_tolerance <= 1e-9):
            raise ValueError(
                f"inversion_tolerance must be in (0, 1e-9], got {self.inversion_tolerance}"
            )


@dataclass
class ReliabilityProfile:
    """Per-channel GA means, polarization values and ranking (1-based indices)."""

    n: int
    design_snr_db: float
    means: np.ndarray  # public order, shape (n,)
    b: np.ndarray  # exp(-mean/4), small values = reliable channels
    rank: np.ndarray  # 1-based channel indices, most reliable first


def phi(x):
    """Two-branch approximation of 1 - E[tanh(L/2)] for L ~ N(x, 2x).

    First branch on [0, 10], asymptotic branch above 10.  Scalar or array.
    """
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise ValueError("phi is defined for x >= 0")
    out = np.zeros(x.shape)
    lo = x <= 10.0
    out[lo] = np.exp(_A * np.power(x[lo], _B) + _C)
    hi = ~lo
    xh = x[hi]
    out[hi] = np.sqrt(np.pi / xh) * (1.0 - 10.0 / (7.0 * xh)) * np.exp(-xh / 4.0)
    return float(out[0]) if scalar else out


def phi_inv(y, tolerance: float = 1e-12, bracket_high: float = 1e7):
    """Invert phi by bisection on the branch containing y.

    y in (0, phi(0)].  Values in [PHI_AT_10, phi(0)] are inverted on the first
    branch (x <= 10), smaller values on the asymptotic branch.  The returned x
    satisfies |phi(x) - y| <= tolerance wherever phi has that resolution.
    """
    scalar = np.isscalar(y) or np.ndim(y) == 0
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y_arr <= 0) or np.any(y_arr > PHI_AT_0):
        raise ValueError(f"phi_inv domain is (0, {PHI_AT_0:.6f}]")
    first = y_arr >= PHI_AT_10
    lo = np.where(first, 0.0, 10.0)
    hi = np.where(first, 10.0, float(bracket_high))
    # 120 halvings take the bracket far below double precision.
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        gt = phi(mid) > y_arr
        lo = np.where(gt, mid, lo)
        hi = np.where(gt, hi, mid)
    x = 0.5 * (lo + hi)
    return float(x[0]) if scalar else x


def bitrev_permutation(n: int) -> np.ndarray:
    """0-based bit-reversal permutation of {0..n-1}; involution."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    perm = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        perm |= ((idx >> b) & 1) << (bits - 1 - b)
    return perm


def _ga_means_recursion(levels: int, params: GaParams) -> np.ndarray:
    """GA means after `levels` stages, in polarization (recursion) order.

    Index bits MSB..LSB give the branch taken at stages 1..levels, with a set
    bit marking the doubling branch.  The odd-branch input 1-(1-phi)^2 is
    evaluated as phi*(2-phi), which keeps full precision when phi is tiny.
    """
    if levels < 0 or levels > 20:
        raise ValueError(f"levels must be in [0, 20], got {levels}")
    bracket = max(20.0, 2.0 * params.initial_mean * 2.0**levels)
    means = np.array([params.initial_mean])
    for _ in range(levels):
        ph = phi(means)
        worse = phi_inv(ph * (2.0 - ph), params.inversion_tolerance, bracket)
        nxt = np.empty(2 * means.size)
        nxt[0::2] = worse
        nxt[1::2] = 2.0 * means
        means = nxt
    return means


def ga_means(levels: int, params: GaParams) -> np.ndarray:
    """GA means for 2^levels channels, in the public (generator row) order."""
    rec = _ga_means_recursion(levels, params)
    return rec[bitrev_permutation(rec.size)]


def sort_polarization(b) -> tuple[np.ndarray, np.ndarray]:
    """Sort polarization values ascending; return (sorted values, 1-based index map).

    Ties break toward the channel whose 0-based index has more set bits, then
    toward the larger index, so that equal-value prefixes stay closed under
    binary domination.
    """
    b = np.asarray(b, dtype=float)
    if b.size == 0:
        raise ValueError("b must be non-empty")
    pops = np.array([bin(i).count("1") for i in range(b.size)])
    order = sorted(range(b.size), key=lambda i: (b[i], -pops[i], -i))
    k = np.asarray(order, dtype=np.int64) + 1
    return b[k - 1], k


def build_profile(n: int, params: GaParams | None = None) -> ReliabilityProfile:
    """Construct the reliability profile for a mother code of length n."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    params = params or GaParams()
    levels = n.bit_length() - 1
    means = ga_means(levels, params)
    # b = exp(-mean/4) orders identically to descending means; only the
    # ordering is contractual.  Underflows to 0.0 for means above ~2800.
    b = np.exp(-means / 4.0)
    _, rank = sort_polarization(b)
    return ReliabilityProfile(
        n=n, design_snr_db=params.design_snr_db, means=means, b=b, rank=rank
    )


def effective_means(
    profile: ReliabilityProfile, shortened: tuple[int, ...] | list[int]
) -> np.ndarray:
    """Per-channel GA means when the code bits at `shortened` (1-based public
    positions) are known to the decoder.

    Known positions enter the recursion with an infinite channel mean; the
    check-node step for unequal inputs uses 1-(1-phi(a))(1-phi(b)).  With an
    empty set this reproduces the profile means.  Used to pick information
    sets on shortened codes, where the mother ranking is unreliable.
    """
    n = profile.n
    m1 = initial_mean_from_snr(profile.design_snr_db)
    bracket = max(20.0, 2.0 * m1 * n)
    rev = bitrev_permutation(n)
    ch = np.full(n, m1)
    for idx in shortened:
        ch[idx - 1] = np.inf
    out = np.empty(n)

    def minus(a, b):
        res = np.empty_like(a)
        ia, ib = np.isinf(a), np.isinf(b)
        res[ia & ib] = np.inf
        res[ia & ~ib] = b[ia & ~ib]
        res[ib & ~ia] = a[ib & ~ia]
        fin = ~ia & ~ib
        if fin.any():
            pa, pb = phi(a[fin]), phi(b[fin])
            res[fin] = phi_inv(pa + pb - pa * pb, bracket_high=bracket)
        return res

    def descend(v, base):
        if v.size == 1:
            out[base] = v[0]
            return
        h = v.size // 2
        descend(minus(v[:h], v[h:]), base)
        descend(v[:h] + v[h:], base + h)

    descend(ch[rev], 0)
    return out[rev]


def rank_channels(means: np.ndarray) -> np.ndarray:
    """Rank channels by descending mean (1-based, most reliable first).

    Same tie-break as sort_polarization; infinite means tie among themselves.
    """
    pops = np.array([bin(i).count("1") for i in range(means.size)])
    order = sorted(range(means.size), key=lambda i: (-means[i], -pops[i], -i))
    return np.asarray(order, dtype=np.int64) + 1


def profile_to_csv(profile: ReliabilityProfile) -> str:
    """CSV with columns index,mean,b,rank_position (1-based, full precision)."""
    pos = np.empty(profile.n, dtype=np.int64)
    pos[profile.rank - 1] = np.arange(1, profile.n + 1)
    buf = io.StringIO()
    buf.write("index,mean,b,rank_position\n")
    for i in range(profile.n):
        buf.write(f"{i + 1},{profile.means[i]!r},{profile.b[i]!r},{pos[i]}\n")
    return buf.getvalue()
