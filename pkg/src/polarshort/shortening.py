"""Shortening pattern generation, validation and code specification.

A pattern lists the 1-based generator rows/columns removed when a mother code
of length n is shortened to n'.  All three built-in methods produce patterns
closed under bitwise domination of the 0-based index, which is exactly the
condition for the removed code bits to be structurally zero whenever the
removed input bits are zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .construction import (
    ReliabilityProfile,
    bitrev_permutation,
    effective_means,
    rank_channels,
)

METHODS = ("PD", "CW", "RQUP", "CUSTOM")

# Hard cap for explicit matrix materialization; production encoding never
# builds the matrix (codec uses the butterfly transform).
MAX_MATERIALIZED_N = 4096


@dataclass(frozen=True)
class ShortenPattern:
    """Ordered shortened positions (1-based), tagged with their method."""

    n: int
    indices: tuple[int, ...]
    method: str = "CUSTOM"

    def __post_init__(self):
        if self.n < 1 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("pattern indices must be distinct")
        if any(not (1 <= i <= self.n) for i in self.indices):
            raise ValueError(f"pattern indices must lie in 1..{self.n}")
        if len(self.indices) >= self.n:
            raise ValueError("cannot shorten away the entire code")

    @property
    def n_short(self) -> int:
        return self.n - len(self.indices)


@dataclass
class ValidationResult:
    ok: bool
    violations: list[tuple[int, int]]  # offending (row, column) pairs, 1-based


@dataclass(frozen=True)
class CodeSpec:
    """Complete description of one (possibly shortened) polar code."""

    n: int
    n_short: int
    k: int
    pattern: ShortenPattern
    info_set: tuple[int, ...]  # 1-based, ascending
    frozen_set: tuple[int, ...]  # complement of info_set, includes the pattern
    design_snr_db: float = 0.0

    @property
    def rate(self) -> float:
        return self.k / self.n_short


def generator_matrix(n: int) -> np.ndarray:
    """Kronecker power of [[1,0],[1,1]] as a uint8 matrix (n <= 4096)."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    if n > MAX_MATERIALIZED_N:
        raise ValueError(f"refusing to materialize a {n}x{n} matrix")
    kernel = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    g = np.array([[1]], dtype=np.uint8)
    for _ in range(n.bit_length() - 1):
        g = np.kron(g, kernel)
    return g


def pd_pattern(profile: ReliabilityProfile, n_short: int) -> ShortenPattern:
    """Shorten the channels ranked most reliable, in ranking order."""
    if not (1 <= n_short <= profile.n):
        raise ValueError(f"n_short must be in 1..{profile.n}, got {n_short}")
    q = profile.n - n_short
    return ShortenPattern(profile.n, tuple(int(i) for i in profile.rank[:q]), "PD")


def cw_pattern(n: int, n_short: int) -> ShortenPattern:
    """Repeatedly delete the weight-1 column of largest index and its row.

    Column weights of the Kronecker-power matrix are tracked incrementally;
    the matrix itself is never materialized.
    """
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    if not (1 <= n_short <= n):
        raise ValueError(f"n_short must be in 1..{n}, got {n_short}")
    bits = n.bit_length() - 1
    # column j has a 1 in every row covering j: weight 2^(zeros of j)
    weights = np.array([1 << (bits - bin(j).count("1")) for j in range(n)])
    alive = np.ones(n, dtype=bool)
    deleted: list[int] = []
    for _ in range(n - n_short):
        candidates = np.flatnonzero(alive & (weights == 1))
        assert candidates.size > 0, "no weight-1 column in a Kronecker-power matrix"
        col = int(candidates[-1])
        rows = [r for r in range(n) if alive[r] and (col & ~r) == 0]
        assert rows == [col], "weight-1 column must sit on the diagonal"
        alive[col] = False
        # removing row `col` lightens every alive column it covers
        sub = col
        while True:
            if alive[sub]:
                weights[sub] -= 1
            if sub == 0:
                break
            sub = (sub - 1) & col
        deleted.append(col + 1)
    return ShortenPattern(n, tuple(deleted), "CW")


def rqup_pattern(n: int, n_short: int) -> ShortenPattern:
    """Bit-reversed tail: images of positions n-1 .. n_short under reversal."""
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    if not (1 <= n_short <= n):
        raise ValueError(f"n_short must be in 1..{n}, got {n_short}")
    rev = bitrev_permutation(n)
    idx = tuple(int(rev[j]) + 1 for j in range(n - 1, n_short - 1, -1))
    return ShortenPattern(n, idx, "RQUP")


def validate_pattern(pattern: ShortenPattern) -> ValidationResult:
    """Check that every row carrying a 1 in a removed column is itself removed.

    Equivalent to requiring the 0-based pattern set to be closed under bitwise
    supersets, which guarantees the removed code bits are zero.
    """
    removed = {i - 1 for i in pattern.indices}
    violations: list[tuple[int, int]] = []
    mask = pattern.n - 1
    for col in sorted(removed):
        rem = (~col) & mask
        sup = rem
        while True:
            row = col | sup
            if row not in removed:
                violations.append((row + 1, col + 1))
            if sup == 0:
                break
            sup = (sup - 1) & rem
    return ValidationResult(ok=not violations, violations=violations)


def reduce_generator(n: int, pattern: ShortenPattern) -> np.ndarray:
    """Mother matrix with the pattern's rows and columns removed."""
    if pattern.n != n:
        raise ValueError(f"pattern is for n={pattern.n}, not {n}")
    g = generator_matrix(n)
    keep = np.array([i for i in range(n) if i + 1 not in set(pattern.indices)])
    return g[np.ix_(keep, keep)]


def build_code_spec(
    profile: ReliabilityProfile,
    n_short: int,
    k: int,
    method: str = "PD",
    custom_pattern: ShortenPattern | None = None,
) -> CodeSpec:
    """Assemble the code: pattern, information set and frozen set.

    The information set holds the k most reliable surviving channels under
    the shortening-aware GA re-evaluation (decoder sees infinite LLRs at the
    shortened positions).  With no shortening this reduces to the profile
    ranking, so mother codes follow the plain GA order.
    """
    n = profile.n
    if not (0 <= k <= n_short):
        raise ValueError(f"k must be in 0..{n_short}, got {k}")
    if not (n // 2 < n_short <= n):
        raise ValueError(f"n_short must satisfy n/2 < n' <= n, got {n_short}")
    method = method.upper()
    if method == "PD":
        pattern = pd_pattern(profile, n_short)
    elif method == "CW":
        pattern = cw_pattern(n, n_short)
    elif method == "RQUP":
        pattern = rqup_pattern(n, n_short)
    elif method == "CUSTOM":
        if custom_pattern is None:
            raise ValueError("CUSTOM method requires custom_pattern")
        if custom_pattern.n != n or custom_pattern.n_short != n_short:
            raise ValueError("custom pattern does not match n/n_short")
        pattern = custom_pattern
    else:
        raise ValueError(f"unknown method {method!r}")

    check = validate_pattern(pattern)
    if not check.ok:
        raise ValueError(
            f"invalid shortening pattern ({len(check.violations)} uncovered rows), "
            f"first violations: {check.violations[:5]}"
        )

    eff = effective_means(profile, pattern.indices)
    order = rank_channels(eff)
    excluded = set(pattern.indices)
    survivors = [int(i) for i in order if int(i) not in excluded]
    info = sorted(survivors[:k])
    frozen = sorted(set(range(1, n + 1)) - set(info))
    return CodeSpec(
        n=n,
        n_short=n_short,
        k=k,
        pattern=pattern,
        info_set=tuple(info),
        frozen_set=tuple(frozen),
        design_snr_db=profile.design_snr_db,
    )


def pattern_to_json(pattern: ShortenPattern) -> str:
    return json.dumps(
        {
            "n": pattern.n,
            "n_short": pattern.n_short,
            "method": pattern.method,
            "indices": list(pattern.indices),
        }
    )


def pattern_from_json(text: str) -> ShortenPattern:
    obj = json.loads(text)
    pattern = ShortenPattern(
        n=int(obj["n"]),
        indices=tuple(int(i) for i in obj["indices"]),
        method=str(obj["method"]),
    )
    if pattern.n_short != int(obj["n_short"]):
        raise ValueError(
            f"n_short field ({obj['n_short']}) disagrees with indices "
            f"({pattern.n_short})"
        )
    return pattern
