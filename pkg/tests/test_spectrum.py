import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from polarshort import (
    ShortenPattern,
    build_spectrum,
    compare_methods,
    d_sd,
    lambda_sd,
    path_zeros,
)
from polarshort.spectrum import (
    removed_zero_coeffs,
    single_spectrum_json,
    spectrum_report_json,
)


def brute_force_zero_coeffs(levels, removed):
    """Enumerate every 0/1 branch string and count zeros of the survivors."""
    counts = [0] * (levels + 1)
    for i, path in enumerate(itertools.product("01", repeat=levels)):
        if i + 1 in removed:
            continue
        counts[path.count("0")] += 1
    return tuple(counts)


def test_path_zeros_examples():
    assert path_zeros(16, 4) == 0
    assert path_zeros(1, 4) == 4
    assert path_zeros(13, 4) == 2
    with pytest.raises(ValueError):
        path_zeros(17, 4)


def test_spectrum_worked_examples():
    full = build_spectrum(4)
    assert full.zero_coeffs == (1, 4, 6, 4, 1)
    assert lambda_sd(full) == 2

    short = build_spectrum(4, ShortenPattern(16, (13, 14, 15, 16)))
    assert short.zero_coeffs == (0, 2, 5, 4, 1)
    assert lambda_sd(short) == Fraction(7, 4)
    assert d_sd(short) == Fraction(5, 4)

    tiny = build_spectrum(1)
    assert tiny.zero_coeffs == (1, 1)
    assert d_sd(tiny) == Fraction(1, 2)


def test_unshortened_coeffs_are_binomial():
    from math import comb

    for levels in range(1, 9):
        spec = build_spectrum(levels)
        assert spec.zero_coeffs == tuple(comb(levels, r) for r in range(levels + 1))
        assert lambda_sd(spec) == Fraction(levels, 2)
        assert d_sd(spec) == Fraction(levels, 2)


def test_spectrum_symmetry_and_totals(rng):
    for levels in (3, 6, 9):
        n = 1 << levels
        q = int(rng.integers(1, n // 2))
        removed = tuple(int(i) + 1 for i in rng.choice(n, size=q, replace=False))
        spec = build_spectrum(levels, ShortenPattern(n, removed))
        assert sum(spec.zero_coeffs) == n - q
        assert sum(spec.one_coeffs) == n - q
        assert all(c >= 0 for c in spec.zero_coeffs)
        assert spec.zero_coeffs == spec.one_coeffs[::-1]


def test_shortening_decreases_lambda(rng):
    # Strict decrease whenever any removed path carries a zero branch; the
    # all-ones path alone contributes nothing to the numerator, so the
    # singleton pattern {n} leaves lambda unchanged.
    for levels in (2, 5, 8, 11):
        n = 1 << levels
        base = lambda_sd(build_spectrum(levels))
        assert lambda_sd(build_spectrum(levels, ShortenPattern(n, (n,)))) == base
        for _ in range(12):
            q = int(rng.integers(1, n))
            removed = tuple(int(i) + 1 for i in rng.choice(n, size=q, replace=False))
            lam = lambda_sd(build_spectrum(levels, ShortenPattern(n, removed)))
            if set(removed) == {n}:
                assert lam == base
            else:
                assert lam < base


def test_brute_force_equivalence(rng):
    for levels in range(1, 13):
        n = 1 << levels
        q = int(rng.integers(0, min(n - 1, 200)))
        removed = set(int(i) + 1 for i in rng.choice(n, size=q, replace=False))
        pattern = ShortenPattern(n, tuple(removed)) if removed else None
        spec = build_spectrum(levels, pattern)
        assert spec.zero_coeffs == brute_force_zero_coeffs(levels, removed)


def test_removed_coeffs_complement(profile_cache):
    from polarshort import pd_pattern

    prof = profile_cache(64)
    pat = pd_pattern(prof, 40)
    full = build_spectrum(6)
    short = build_spectrum(6, pat)
    removed = removed_zero_coeffs(6, pat)
    assert tuple(f - s for f, s in zip(full.zero_coeffs, short.zero_coeffs)) == removed


def test_compare_methods_orderings(profile_cache):
    rep = compare_methods(9, 480, profile_cache(512))
    assert rep.methods["PD"].lam > rep.methods["RQUP"].lam
    assert rep.methods["PD"].lam > rep.methods["CW"].lam
    assert rep.lambda_ranking[0] == "PD"
    # the bit-reversed tail and the plain tail remove equal zero-multisets
    assert rep.methods["RQUP"].lam == rep.methods["CW"].lam

    rep2 = compare_methods(11, 1920, profile_cache(2048))
    assert rep2.methods["PD"].lam > rep2.methods["RQUP"].lam
    assert rep2.methods["PD"].lam > rep2.methods["CW"].lam


def test_compare_methods_identical_patterns_at_n8(profile8):
    rep = compare_methods(3, 5, profile8)
    assert set(rep.methods["PD"].pattern) == set(rep.methods["RQUP"].pattern)
    assert rep.methods["PD"].spectrum == rep.methods["RQUP"].spectrum
    assert rep.methods["PD"].lam == rep.methods["RQUP"].lam


def test_compare_rejects_out_of_regime(profile8):
    with pytest.raises(ValueError):
        compare_methods(3, 4, profile8)
    with pytest.raises(ValueError):
        compare_methods(3, 6, profile8, eval_x=Fraction(3, 2))


def test_report_json_schema(profile_cache):
    rep = compare_methods(9, 480, profile_cache(512))
    obj = json.loads(spectrum_report_json(rep))
    for name in ("PD", "CW", "RQUP"):
        m = obj["methods"][name]
        assert set(m) >= {"pattern", "zero_coeffs", "one_coeffs", "lambda", "d"}
        assert Fraction(m["lambda"]) == rep.methods[name].lam
    assert obj["lambda_ranking"][0] == "PD"


def test_single_spectrum_json_formats():
    text = single_spectrum_json(4, ShortenPattern(16, (13, 14, 15, 16)))
    obj = json.loads(text)
    assert obj["lambda"] == "7/4"
    assert obj["lambda_decimal"] == "1.7500"
