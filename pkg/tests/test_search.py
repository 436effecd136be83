import json
import math

import pytest

import oracles
from primesqf import arith, counting, search, sieve
from primesqf.search import Parity


TABLE1 = {
    2: (2, 4),
    6: (2, 4, 6),
    30: (2, 4, 6, 8),
    210: (2, 4, 6, 8, 10, 12),
    2310: (2, 4, 6, 8, 10, 12, 14),
    30030: (2, 4, 6, 8, 10, 12, 14, 16, 18),
}


# ---------------------------------------------------------------------------
# exception sets

@pytest.mark.parametrize("k", sorted(TABLE1))
def test_primorial_exception_sets_to_1e4(k):
    rep = search.exception_set(k, 10**4, Parity.EVEN_ONLY)
    assert rep.exceptions == TABLE1[k]
    assert all(n % 2 == 0 for n in rep.exceptions)


def test_exception_set_all_parity_k33():
    rep = search.exception_set(33, 10**4, Parity.ALL)
    assert rep.largest() == 35
    # every listed exception re-verifies as a true zero of Rbar
    for n in rep.exceptions:
        if n >= 3:
            assert counting.R_bar_k(n, 33).terms == 0
    # and nothing just above the largest one is an exception
    assert counting.R_bar_k(36, 33).terms > 0


def test_exception_set_against_exhaustive_small():
    sqf = [False] + [oracles.is_squarefree(x) for x in range(1, 401)]
    pr = [oracles.is_prime(x) for x in range(0, 401)]

    def brute(k, parity):
        out = []
        for n in range(2, 401):
            if parity is Parity.EVEN_ONLY and n % 2:
                continue
            if not any(
                sqf[eta] and pr[n - eta] and math.gcd(eta, k) == 1
                for eta in range(2, n - 1)
            ):
                out.append(n)
        return tuple(out)

    for k in (1, 2, 15, 33, 30):
        for parity in (Parity.EVEN_ONLY, Parity.ALL):
            assert search.exception_set(k, 400, parity).exceptions == brute(k, parity)


def test_exception_set_validation():
    with pytest.raises(ValueError):
        search.exception_set(12, 100, Parity.ALL)
    with pytest.raises(ValueError):
        search.exception_set(2, 3, Parity.ALL)
    with pytest.raises(TypeError):
        search.exception_set(2, 100, "even")


def test_subset_relation_odd_k_small():
    for k in (1, 3, 5, 15, 33, 35):
        s1 = set(search.exception_set(k, 10**4, Parity.EVEN_ONLY).exceptions)
        s2 = set(search.exception_set(2 * k, 10**4, Parity.EVEN_ONLY).exceptions)
        assert s1 <= s2


def test_exception_report_json_roundtrip():
    rep = search.exception_set(6, 100, Parity.EVEN_ONLY)
    doc = json.loads(json.dumps(rep.to_json()))
    assert tuple(doc["exceptions"]) == rep.exceptions
    assert doc["k"] == 6 and doc["parity"] == "even"


# ---------------------------------------------------------------------------
# Goldbach pair candidates

def test_goldbach_pair_exceptions():
    assert search.goldbach_pair_exceptions(2, 100) == [4]
    assert search.goldbach_pair_exceptions(6, 100) == [4, 6]
    got = search.goldbach_pair_exceptions(24738, 100)
    assert 38 in got
    # every reported n really has Rbar = 0
    for n in got:
        assert counting.R_bar_k(n, 24738).terms == 0


def test_goldbach_pair_validation():
    with pytest.raises(ValueError):
        search.goldbach_pair_exceptions(15, 100)  # odd k
    with pytest.raises(ValueError):
        search.goldbach_pair_exceptions(12, 100)  # not squarefree


# ---------------------------------------------------------------------------
# triples

def test_find_triple_basic():
    sq = sieve.sieve_squarefree(1, 20)
    w = search.find_triple(10, [3, 5, 7], sq)
    assert w is not None
    assert [(r.p, r.eta) for r in w.reps] == [(7, 3), (5, 5), (3, 7)]  # descending probe
    for r in w.reps:
        assert r.p + r.eta == 10


def test_find_triple_rejects_gcd_pair():
    # n = 44 with window {29, 11, 7, 3}: etas 15, 33, 37, 41; the pair
    # (15, 33) shares 3 so the witness must route around it
    sq = sieve.sieve_squarefree(1, 50)
    w = search.find_triple(44, [29, 11, 7, 3], sq)
    assert w is not None
    etas = [r.eta for r in w.reps]
    assert not (15 in etas and 33 in etas)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        assert math.gcd(etas[a], etas[b]) <= 2


def test_find_triple_exhausted_window():
    sq = sieve.sieve_squarefree(1, 50)
    assert search.find_triple(10, [3, 5], sq) is None  # only two candidates


def test_find_triple_coverage_gap():
    sq = sieve.sieve_squarefree(1, 5)
    with pytest.raises(search.CoverageError):
        search.find_triple(100, [3, 5, 7], sq)


def test_find_triple_validation():
    sq = sieve.sieve_squarefree(1, 50)
    with pytest.raises(ValueError):
        search.find_triple(10, [], sq)
    with pytest.raises(ValueError):
        search.find_triple(10, [11], sq)  # window prime >= n
    with pytest.raises(ValueError):
        search.find_triple(10, [3, 5, 7], sieve.sieve_primes(1, 50))


def test_triple_witnesses_revalidate():
    win = search._window_below(600, 100)
    flo, fhi = 1, 1300 - win[-1]
    sq = sieve.sieve_squarefree(flo, fhi)
    for n in range(600, 1300):
        w = search.find_triple(n, win, sq)
        assert w is not None
        etas = [r.eta for r in w.reps]
        assert len({r.p for r in w.reps}) == 3
        for r in w.reps:
            assert arith.is_prime(r.p) and arith.is_squarefree(r.eta)
            assert r.p + r.eta == n and r.eta > 1
        for a, b in ((0, 1), (0, 2), (1, 2)):
            assert math.gcd(etas[a], etas[b]) <= 2


# ---------------------------------------------------------------------------
# range verification

def test_verify_range_clean_to_2e4():
    rep = search.verify_range(600, 2 * 10**4, window_size=100)
    assert rep.failures == ()
    assert rep.intervals >= 1


def test_verify_range_small_window_failures_recheck():
    rep = search.verify_range(600, 10**4, window_size=3, interval_size=5000)
    # a 3-prime window gives no guarantee; any reported failure must still
    # have a witness under the full window
    assert rep.failures  # this tiny window does fail on this range
    win100 = {}
    for n in list(rep.failures)[:50]:
        s = (n // 5000) * 5000
        if s not in win100:
            win100[s] = search._window_below(max(s, 600), 100)
        win = win100[s]
        sq = sieve.sieve_squarefree(1, n)
        assert search.find_triple(n, win, sq) is not None


def test_verify_range_worker_determinism():
    a = search.verify_range(600, 3 * 10**4, window_size=50, workers=1, interval_size=4096)
    b = search.verify_range(600, 3 * 10**4, window_size=50, workers=2, interval_size=4096)
    assert a.failures == b.failures
    assert a.intervals == b.intervals


def test_verify_range_checkpoint_resume(tmp_path):
    ck = tmp_path / "scan.journal"
    full = search.verify_range(600, 8000, window_size=40, checkpoint=str(ck), interval_size=2000)
    lines = ck.read_text().strip().splitlines()
    assert len(lines) == full.intervals
    # simulate an interrupted run: keep only the first journal line
    ck.write_text(lines[0] + "\n")
    resumed = search.verify_range(600, 8000, window_size=40, checkpoint=str(ck), interval_size=2000)
    assert resumed.failures == full.failures
    assert resumed.resumed_intervals == 1
    # full journal resume: nothing recomputed
    again = search.verify_range(600, 8000, window_size=40, checkpoint=str(ck), interval_size=2000)
    assert again.resumed_intervals == full.intervals
    assert again.failures == full.failures


def test_verify_range_checkpoint_corruption(tmp_path):
    ck = tmp_path / "scan.journal"
    search.verify_range(600, 4000, window_size=40, checkpoint=str(ck), interval_size=2000)
    raw = ck.read_text()
    ck.write_text(raw.replace("600", "601", 1))
    with pytest.raises(search.CheckpointError):
        search.verify_range(600, 4000, window_size=40, checkpoint=str(ck), interval_size=2000)


def test_verify_range_validation():
    with pytest.raises(ValueError):
        search.verify_range(500, 1000)
    with pytest.raises(ValueError):
        search.verify_range(600, 600)
    with pytest.raises(ValueError):
        search.verify_range(600, 1000, window_size=0)


def test_verify_report_json_roundtrip():
    rep = search.verify_range(600, 2000, window_size=30)
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["lo"] == 600 and doc["hi"] == 2000
    assert tuple(doc["failures"]) == rep.failures


# ---------------------------------------------------------------------------
# certificates

def test_certificate_named_exceptions():
    cert = search.largest_exception_certificate(
        24738,
        Parity.EVEN_ONLY,
        search.GOLDBACH_VERIFIED_FLOOR,
        10**4,
        threshold_source="external Goldbach verification (even n)",
    )
    assert cert.largest_exception == 38
    assert cert.gap == (10**4, search.GOLDBACH_VERIFIED_FLOOR)
    assert "not verified locally" in cert.gap_note
    assert "Goldbach" in cert.gap_note

    cert33 = search.largest_exception_certificate(
        33,
        Parity.ALL,
        search.REPORTED_TRIPLE_SCAN_LIMIT,
        10**4,
        threshold_source="reported cluster-scale scan to 8e9 (not reproduced locally)",
    )
    assert cert33.largest_exception == 35
    assert cert33.gap == (10**4, search.REPORTED_TRIPLE_SCAN_LIMIT)

    cert2 = search.largest_exception_certificate(2, Parity.EVEN_ONLY, None, 10**4)
    assert cert2.largest_exception == 4
    assert cert2.gap is None
    assert "nothing is claimed" in cert2.gap_note


def test_certificate_gap_closes_when_scan_reaches_threshold():
    cert = search.largest_exception_certificate(2, Parity.EVEN_ONLY, 5000, 10**4)
    assert cert.gap is None and "no gap" in cert.gap_note


def test_certificate_json_roundtrip():
    cert = search.largest_exception_certificate(6, Parity.EVEN_ONLY, 10**6, 10**4)
    doc = json.loads(json.dumps(cert.to_json()))
    assert doc["largest_exception"] == 6
    assert doc["gap"] == [10**4, 10**6]
