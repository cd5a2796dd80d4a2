import json
import random

import numpy as np
import pytest

from uspkit import bruteforce
from uspkit.arith import factorize, unitary_sigma
from uspkit.search import (
    CLASS_ORDER,
    CheckpointError,
    SearchConfig,
    find_perfect,
    find_super_perfect,
    find_unitary_perfect,
    find_usp,
    parse_checkpoint,
    render_checkpoint,
    run_search,
    sigma_from_factorization,
    verify_hit,
)
from uspkit.sieve import sigma_segment, sigma_star_segment

rng = random.Random(65537)


def test_sigma_star_segment_first_ten():
    assert list(sigma_star_segment(1, 11)) == [1, 3, 4, 5, 6, 12, 8, 9, 10, 18]


def test_sigma_star_segment_known_values():
    seg = sigma_star_segment(165, 239)
    assert seg[0] == 288          # sigma*(165) = 4 * 6 * 12
    assert seg[238 - 165] == 432  # sigma*(238) = 3 * 8 * 18


def test_segment_bounds_validation():
    with pytest.raises(ValueError):
        sigma_star_segment(0, 10)
    with pytest.raises(ValueError):
        sigma_star_segment(10, 10)
    with pytest.raises(ValueError):
        sigma_segment(1, 1 << 60)


def test_segments_agree_with_factorization():
    for _ in range(200):
        lo = rng.randrange(1, 10**7)
        seg_star = sigma_star_segment(lo, lo + 50)
        seg_sig = sigma_segment(lo, lo + 50)
        for i in range(50):
            f = factorize(lo + i)
            assert seg_star[i] == unitary_sigma(f)
            assert seg_sig[i] == sigma_from_factorization(f)


def test_segment_split_invariance():
    whole = sigma_star_segment(1, 20001)
    parts = np.concatenate(
        [sigma_star_segment(lo, min(20001, lo + 1024)) for lo in range(1, 20001, 1024)]
    )
    assert (whole == parts).all()


def test_find_usp_first_hits():
    hits = find_usp(300)
    assert [(h.n, h.sigma_star_n, h.sigma_star_sigma_star_n) for h in hits] == [
        (2, 3, 4),
        (9, 10, 18),
        (165, 288, 330),
        (238, 432, 476),
    ]
    assert [h.parity for h in hits] == ["even", "odd", "odd", "even"]


def test_find_usp_trivial_limit():
    assert find_usp(1) == []


def test_find_usp_parity_filter():
    odd = find_usp(1000, parity="odd")
    even = find_usp(1000, parity="even")
    assert [h.n for h in odd] == [9, 165]
    assert [h.n for h in even] == [2, 238]


def test_odd_usp_hits_carry_structure():
    for h in find_usp(10**4, parity="odd"):
        assert h.structure is not None and h.structure.ok
    for h in find_usp(10**4, parity="even"):
        assert h.structure is None


def test_find_unitary_perfect():
    assert [h.n for h in find_unitary_perfect(100)] == [6, 60, 90]
    hits = find_unitary_perfect(10**5)
    assert 87360 in [h.n for h in hits]
    assert unitary_sigma(factorize(87360)) == 2 * 87360
    assert find_unitary_perfect(10**6, parity="odd") == []


def test_find_super_perfect():
    assert [h.n for h in find_super_perfect(100)] == [2, 4, 16, 64]
    hits = find_super_perfect(5000)
    assert 4096 in [h.n for h in hits]
    # sigma(4096) = 8191 is prime, sigma(8191) = 8192 = 2 * 4096
    assert sigma_from_factorization(factorize(4096)) == 8191
    assert find_super_perfect(10**5, parity="odd") == []


def test_find_perfect():
    assert [h.n for h in find_perfect(10**4)] == [6, 28, 496, 8128]


def test_classification_matches_brute_oracle_small():
    limit = 2 * 10**4
    expected = bruteforce.classify_brute(limit)
    hits = run_search(SearchConfig(limit=limit, classes=CLASS_ORDER)).hits
    got = {c: [] for c in CLASS_ORDER}
    for h in hits:
        got[h.classification].append(h.n)
    assert got == expected


def test_hit_lists_strictly_increasing():
    hits = run_search(SearchConfig(limit=10**5, classes=CLASS_ORDER)).hits
    per_class = {c: [] for c in CLASS_ORDER}
    for h in hits:
        per_class[h.classification].append(h.n)
    for ns in per_class.values():
        assert ns == sorted(set(ns))


def test_worker_count_independence():
    seg = 1 << 16
    r1 = run_search(SearchConfig(limit=2 * 10**5, segment_size=seg, workers=1))
    r4 = run_search(SearchConfig(limit=2 * 10**5, segment_size=seg, workers=4))
    assert r1.checkpoint_text == r4.checkpoint_text
    assert [h.n for h in r1.hits] == [h.n for h in r4.hits]


def test_segment_size_independence():
    ra = run_search(SearchConfig(limit=10**5, segment_size=1 << 14))
    rb = run_search(SearchConfig(limit=10**5, segment_size=1 << 20))
    assert [h.n for h in ra.hits] == [h.n for h in rb.hits]


def test_checkpoint_roundtrip(tmp_path):
    cp = str(tmp_path / "cp.txt")
    result = run_search(
        SearchConfig(limit=10**4, segment_size=2048, checkpoint_path=cp)
    )
    limit, seg, hits_by_segment = parse_checkpoint(open(cp).read())
    assert (limit, seg) == (10**4, 2048)
    flat = [h for s in hits_by_segment for h in s]
    assert [h.n for h in flat] == [h.n for h in result.hits]
    assert render_checkpoint(limit, seg, hits_by_segment) == result.checkpoint_text


def test_interrupt_resume_identical(tmp_path):
    cp = str(tmp_path / "cp.txt")
    seg = 2048
    baseline = run_search(SearchConfig(limit=10**4, segment_size=seg))
    partial = run_search(
        SearchConfig(limit=10**4, segment_size=seg, checkpoint_path=cp, max_segments=2)
    )
    assert not partial.completed and partial.segments_done == 2
    resumed = run_search(
        SearchConfig(limit=10**4, segment_size=seg, checkpoint_path=cp, resume=True)
    )
    assert resumed.completed
    assert resumed.checkpoint_text == baseline.checkpoint_text


def test_checkpoint_corruption_refused(tmp_path):
    cp = str(tmp_path / "cp.txt")
    run_search(SearchConfig(limit=300, segment_size=1024, checkpoint_path=cp))
    text = open(cp).read()
    open(cp, "w").write(text.replace("hit 2 3 4 usp", "hit 3 3 4 usp"))
    with pytest.raises(CheckpointError):
        run_search(
            SearchConfig(limit=300, segment_size=1024, checkpoint_path=cp, resume=True)
        )


def test_checkpoint_config_mismatch_refused(tmp_path):
    cp = str(tmp_path / "cp.txt")
    run_search(SearchConfig(limit=300, segment_size=1024, checkpoint_path=cp))
    with pytest.raises(CheckpointError):
        run_search(
            SearchConfig(limit=300, segment_size=2048, checkpoint_path=cp, resume=True)
        )
    with pytest.raises(CheckpointError):
        run_search(SearchConfig(limit=300, resume=True))


def test_sieve_bound_fallback_factorization():
    # a tiny table forces the second application through exact factorization
    capped = run_search(SearchConfig(limit=3000, segment_size=1024, sieve_bound=64))
    full = run_search(SearchConfig(limit=3000, segment_size=1024))
    assert [h.n for h in capped.hits] == [h.n for h in full.hits]


def test_verify_hit_rejects_wrong_class():
    with pytest.raises(RuntimeError):
        verify_hit(10, "usp")
    hit = verify_hit(9, "usp")
    assert (hit.sigma_star_n, hit.sigma_star_sigma_star_n) == (10, 18)
    assert hit.structure.ok


def test_search_hit_json_roundtrip():
    h = verify_hit(165, "usp")
    d = json.loads(h.to_json_line())
    assert d["n"] == 165 and d["sigma_star"] == 288
    assert d["structure"]["ok"] is True
    h = verify_hit(6, "perfect")
    assert json.loads(h.to_json_line())["structure"] is None


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(limit=0)
    with pytest.raises(ValueError):
        SearchConfig(limit=10**11)
    with pytest.raises(ValueError):
        SearchConfig(limit=10, parity="prime")
    with pytest.raises(ValueError):
        SearchConfig(limit=10, classes=("usp", "weird"))
    with pytest.raises(ValueError):
        SearchConfig(limit=10, workers=0)
    with pytest.raises(ValueError):
        SearchConfig(limit=10, segment_size=8)
