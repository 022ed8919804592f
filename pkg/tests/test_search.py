from __future__ import annotations

import json
from fractions import Fraction

import pytest

from mahler_bound import search
from mahler_bound.interval import mpf_to_fraction
from mahler_bound.measure import mahler_measure
from mahler_bound.poly import is_reciprocal, is_root_of_unity_product, parse_polynomial

LEHMER = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")


def _key(f):
    return min(tuple(g.coeffs) for g in search.symmetry_orbit(f))


def test_raw_counts():
    spec = search.SearchSpec(2, 1)
    assert search.estimate_space(spec) == 9
    assert len(list(search.enumerate_candidates(spec, reduce_symmetry=False))) == 9
    rec = search.SearchSpec(10, 1, reciprocal_only=True)
    raw = list(search.enumerate_candidates(rec, reduce_symmetry=False))
    assert len(raw) == 243 and all(is_reciprocal(f) for f in raw)
    assert all(f.degree == 1 for f in search.enumerate_candidates(search.SearchSpec(1, 2)))


def test_each_candidate_once_and_one_per_orbit():
    spec = search.SearchSpec(4, 2)
    got = list(search.enumerate_candidates(spec))
    assert len(got) == len({tuple(f.coeffs) for f in got})
    keys = [_key(f) for f in got if f.constant != 0]
    assert len(keys) == len(set(keys))
    # every raw candidate is represented by a reduced one
    reduced = set(keys)
    for f in search.enumerate_candidates(spec, reduce_symmetry=False):
        if f.constant != 0:
            assert _key(f) in reduced


def test_space_guard():
    with pytest.raises(search.SearchSpaceTooLarge) as info:
        search.find_small_measures(search.SearchSpec(30, 5))
    assert info.value.estimate == 11**30


def test_degree_three_finds_plastic_number_orbit():
    hits = search.find_small_measures(search.SearchSpec(3, 1, measure_cutoff=Fraction("1.4")))
    assert len(hits) == 1
    orbit = search.symmetry_orbit(hits[0].polynomial)
    assert parse_polynomial("x^3-x-1") in orbit
    assert hits[0].measure.contains(mahler_measure(parse_polynomial("x^3-x-1")).measure)


def test_degree_two_has_nothing_below_cutoff():
    assert search.find_small_measures(search.SearchSpec(2, 1, measure_cutoff=Fraction("1.3"))) == []


def test_reciprocal_degree_ten_hits():
    spec = search.SearchSpec(10, 1, reciprocal_only=True)
    hits = search.find_small_measures(spec)
    assert hits[0].polynomial == LEHMER
    assert all(h.reciprocal and is_reciprocal(h.polynomial) for h in hits)
    assert all(not is_root_of_unity_product(h.polynomial) for h in hits)
    assert all(h.measure.certainly_gt(1) and mpf_to_fraction(h.measure.hi) <= Fraction("1.3") for h in hits)
    assert [h.measure.hi for h in hits] == sorted(h.measure.hi for h in hits)
    again = search.find_small_measures(spec)
    assert [h.to_json() for h in again] == [h.to_json() for h in hits]
    # a re-measurement at twice the precision nests inside
    for h in hits[:3]:
        fine = mahler_measure(h.polynomial, precision_bits=512).measure
        assert h.measure.contains(fine)


def test_checkpoint_resume_after_interrupt(tmp_path, monkeypatch):
    monkeypatch.setattr(search, "CHUNK", 8)
    spec = search.SearchSpec(5, 1, measure_cutoff=Fraction("1.6"))
    expected = [h.to_json() for h in search.find_small_measures(spec)]
    path = tmp_path / "run.json"
    real = search._evaluate_chunk
    calls = {"n": 0}

    def flaky(args):
        calls["n"] += 1
        if calls["n"] == 3:
            raise KeyboardInterrupt
        return real(args)

    monkeypatch.setattr(search, "_evaluate_chunk", flaky)
    with pytest.raises(KeyboardInterrupt):
        search.find_small_measures(spec, checkpoint=str(path))
    saved = json.loads(path.read_text())
    assert saved["chunks_done"] == 2 and saved["spec_hash"] == spec.digest()
    monkeypatch.setattr(search, "_evaluate_chunk", real)
    resumed = search.find_small_measures(spec, checkpoint=str(path))
    assert [h.to_json() for h in resumed] == expected


def test_checkpoint_for_other_spec_is_refused(tmp_path):
    path = tmp_path / "run.json"
    search.find_small_measures(search.SearchSpec(2, 1), checkpoint=str(path))
    with pytest.raises(ValueError):
        search.find_small_measures(search.SearchSpec(3, 1), checkpoint=str(path))


def test_parallel_matches_serial():
    spec = search.SearchSpec(10, 1, reciprocal_only=True)
    serial = [h.to_json() for h in search.find_small_measures(spec, jobs=1)]
    parallel = [h.to_json() for h in search.find_small_measures(spec, jobs=2)]
    assert serial == parallel


def test_smyth_examples():
    verdict, m = search.smyth_check_one(parse_polynomial("x^3-x-1"))
    assert verdict == "equal"
    verdict, m = search.smyth_check_one(parse_polynomial("x-2"))
    assert verdict == "ok" and m.contains(2)
    with pytest.raises(ValueError):
        search.smyth_check_one(LEHMER)


def test_smyth_spot_check_sample():
    rep = search.smyth_spot_check(sample_size=150, degree=6, coeff_bound=3, seed=1)
    assert rep.passed and rep.sampled == 150 and not rep.violations
