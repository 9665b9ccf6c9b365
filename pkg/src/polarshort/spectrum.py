"""Path-weight spectrum analysis over the channel polarization tree.

Every channel index corresponds to one root-to-leaf path; the branch toward
the degraded child is labeled 1 and the doubling branch 0, so a channel with
0-based index i has popcount(i) ones and l - popcount(i) zeros.  Both labels
are invariant under bit reversal, making the spectra domain-independent.
All arithmetic is exact (integers and fractions).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .construction import ReliabilityProfile
from .shortening import ShortenPattern, cw_pattern, pd_pattern, rqup_pattern


@dataclass(frozen=True)
class PathSpectrum:
    """Counts of surviving paths per number of zero-labeled branches."""

    levels: int
    zero_coeffs: tuple[int, ...]  # coefficient of X^r: paths with r zeros
    one_coeffs: tuple[int, ...]  # coefficient of X^k: paths with k ones

    @property
    def n_mother(self) -> int:
        return 1 << self.levels

    @property
    def survivors(self) -> int:
        return sum(self.zero_coeffs)


def path_zeros(index: int, levels: int) -> int:
    """Zero-labeled branches on the path of 1-based channel `index`."""
    if not (1 <= index <= (1 << levels)):
        raise ValueError(f"index must lie in 1..{1 << levels}")
    return levels - bin(index - 1).count("1")


def build_spectrum(levels: int, pattern: ShortenPattern | None = None) -> PathSpectrum:
    """Spectrum of the paths surviving the given shortening pattern."""
    n = 1 << levels
    removed: set[int] = set()
    if pattern is not None:
        if any(i > n for i in pattern.indices):
            raise ValueError("pattern indices exceed 2^levels")
        removed = set(pattern.indices)
    zeros = [0] * (levels + 1)
    ones = [0] * (levels + 1)
    for i in range(1, n + 1):
        if i in removed:
            continue
        z = path_zeros(i, levels)
        zeros[z] += 1
        ones[levels - z] += 1
    return PathSpectrum(levels, tuple(zeros), tuple(ones))


def lambda_sd(spectrum: PathSpectrum) -> Fraction:
    """Average zero-count over surviving paths, normalized by the mother length."""
    total = sum(r * c for r, c in enumerate(spectrum.zero_coeffs))
    return Fraction(total, spectrum.n_mother)


def d_sd(spectrum: PathSpectrum) -> Fraction:
    """Average one-count over surviving paths, normalized by the mother length."""
    total = sum(k * c for k, c in enumerate(spectrum.one_coeffs))
    return Fraction(total, spectrum.n_mother)


def removed_zero_coeffs(levels: int, pattern: ShortenPattern) -> tuple[int, ...]:
    """Zero-count polynomial of the removed paths alone."""
    coeffs = [0] * (levels + 1)
    for i in pattern.indices:
        coeffs[path_zeros(i, levels)] += 1
    return tuple(coeffs)


def _eval_poly(coeffs: tuple[int, ...], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass
class MethodReport:
    method: str
    pattern: tuple[int, ...]
    spectrum: PathSpectrum
    lam: Fraction
    d: Fraction
    removed_coeffs: tuple[int, ...]
    removed_eval: Fraction  # removed-path polynomial at the evaluation point


@dataclass
class CompareReport:
    n: int
    n_short: int
    eval_x: Fraction
    methods: dict[str, MethodReport]
    lambda_ranking: list[str]  # method names, largest lambda first
    dominance: dict[str, str]  # pairwise coefficient-wise comparison verdicts


def compare_methods(
    levels: int,
    n_short: int,
    profile: ReliabilityProfile,
    eval_x: Fraction | float = Fraction(1, 2),
) -> CompareReport:
    """Spectra, lambda/d and removed-set comparisons for PD, CW and RQUP."""
    n = 1 << levels
    if profile.n != n:
        raise ValueError(f"profile is for n={profile.n}, expected {n}")
    if not (n // 2 < n_short <= n):
        raise ValueError(f"n_short must satisfy n/2 < n' <= n, got {n_short}")
    x = Fraction(eval_x).limit_denominator(10**9) if not isinstance(eval_x, Fraction) else eval_x
    if not (0 < x < 1):
        raise ValueError("evaluation point must lie in (0, 1)")
    patterns = {
        "PD": pd_pattern(profile, n_short),
        "CW": cw_pattern(n, n_short),
        "RQUP": rqup_pattern(n, n_short),
    }
    methods: dict[str, MethodReport] = {}
    for name, pat in patterns.items():
        spec = build_spectrum(levels, pat)
        removed = removed_zero_coeffs(levels, pat)
        methods[name] = MethodReport(
            method=name,
            pattern=pat.indices,
            spectrum=spec,
            lam=lambda_sd(spec),
            d=d_sd(spec),
            removed_coeffs=removed,
            removed_eval=_eval_poly(removed, x),
        )
    ranking = sorted(methods, key=lambda m: methods[m].lam, reverse=True)
    dominance = {}
    names = list(methods)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            ca, cb = methods[a].removed_coeffs, methods[b].removed_coeffs
            if ca == cb:
                verdict = "equal"
            elif all(p <= q for p, q in zip(ca, cb)):
                verdict = f"{a} <= {b} coefficient-wise"
            elif all(p >= q for p, q in zip(ca, cb)):
                verdict = f"{b} <= {a} coefficient-wise"
            else:
                verdict = "incomparable"
            dominance[f"{a}/{b}"] = verdict
    return CompareReport(
        n=n,
        n_short=n_short,
        eval_x=x,
        methods=methods,
        lambda_ranking=ranking,
        dominance=dominance,
    )


def spectrum_report_json(report: CompareReport, extra: dict | None = None) -> str:
    """JSON report with exact rational strings for lambda and d."""
    obj = {
        "n": report.n,
        "n_short": report.n_short,
        "eval_x": str(report.eval_x),
        "lambda_ranking": report.lambda_ranking,
        "dominance": report.dominance,
        "methods": {
            name: {
                "pattern": list(m.pattern),
                "zero_coeffs": list(m.spectrum.zero_coeffs),
                "one_coeffs": list(m.spectrum.one_coeffs),
                "lambda": str(m.lam),
                "d": str(m.d),
                "removed_coeffs": list(m.removed_coeffs),
                "removed_eval": str(m.removed_eval),
            }
            for name, m in report.methods.items()
        },
    }
    if extra:
        obj.update(extra)
    return json.dumps(obj, indent=2, sort_keys=True)


def single_spectrum_json(
    levels: int, pattern: ShortenPattern | None, extra: dict | None = None
) -> str:
    """JSON for one spectrum (optionally shortened by a custom pattern)."""
    spec = build_spectrum(levels, pattern)
    lam = lambda_sd(spec)
    d = d_sd(spec)
    obj = {
        "n": spec.n_mother,
        "n_short": spec.survivors,
        "pattern": list(pattern.indices) if pattern else [],
        "zero_coeffs": list(spec.zero_coeffs),
        "one_coeffs": list(spec.one_coeffs),
        "lambda": str(lam),
        "lambda_decimal": f"{float(lam):.4f}",
        "d": str(d),
        "d_decimal": f"{float(d):.4f}",
    }
    if extra:
        obj.update(extra)
    return json.dumps(obj, indent=2, sort_keys=True)
