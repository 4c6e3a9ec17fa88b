import math

import numpy as np
import pytest

import torcor


def test_generators_and_words():
    seq = torcor.gen_equispaced(4)
    assert list(seq.words) == [0, 1 << 62, 1 << 63, 3 << 62]
    assert np.allclose(seq.to_float(), [0, 0.25, 0.5, 0.75])
    assert len(torcor.gen_uniform(7, 100)) == 100
    assert list(torcor.gen_uniform(7, 10).words) == list(torcor.gen_uniform(7, 10).words)
    golden = torcor.gen_kronecker(torcor.golden_word(), 1, 1)
    assert abs(golden.to_float()[0] - (math.sqrt(5) - 1) / 2) < 1e-15


def test_sequence_from_words_and_roundtrip(tmp_path):
    seq = torcor.Sequence(np.array([1, 2, 3], dtype=np.uint64))
    assert list(seq.words) == [1, 2, 3]
    orig = torcor.gen_perturbed_pairs(3, 50)
    path = tmp_path / "x.tseq"
    orig.save(str(path))
    back = torcor.load(str(path))
    assert list(back.words) == list(orig.words)
    assert back.provenance == orig.provenance


def test_pair_correlation_ties():
    seq = torcor.gen_equispaced(128)
    le = torcor.pair_correlation(seq, [1], "le")[0]
    lt = torcor.pair_correlation(seq, [1], "lt")[0]
    assert le["raw_count"] == 256 and lt["raw_count"] == 0
    assert le["normalized"] == 2.0


def test_kfold_and_multiset_count():
    seq = torcor.gen_mirrored(1, 200)
    zero = torcor.count_kfold(seq, k=2, s=[0])[0]
    assert zero["raw_count"] >= 200 * 200 / 4 - 100
    assert zero["excluded_C"] == torcor.multiset_equal_count(200, 2) == 2 * 200 * 200 - 200
    rate1 = torcor.count_kfold(seq, k=2, s=["1/2"], alpha="1")[0]
    assert rate1["alpha"] == "1"


def test_kfold_errors():
    seq = torcor.gen_uniform(1, 10)
    with pytest.raises(ValueError):
        torcor.pair_correlation(seq, [5])
    with pytest.raises(MemoryError):
        torcor.count_kfold(torcor.gen_uniform(1, 500), k=2, s=[1], budget="1K")


def test_weyl_and_discrepancy():
    seq = torcor.gen_equispaced(64)
    sums, err = torcor.weyl_sums(seq, 128, "direct")
    assert sums.shape == (128,)
    assert abs(sums[63] - 1) <= err and abs(sums[0]) <= err
    assert torcor.exact_discrepancy(seq) == 1 / 64
    u = torcor.gen_uniform(2, 1000)
    assert torcor.erdos_turan_bound(u, 200) >= torcor.exact_discrepancy(u)
    assert torcor.grid_discrepancy(u, 100) <= torcor.exact_discrepancy(u) + 1e-15


def test_bounds_and_key_inequality():
    seq = torcor.gen_uniform(4, 300)
    d = torcor.correlation_discrepancy(seq, 1, 5)
    assert d["value"] >= 0
    b = torcor.theorem5_bound(1, 5.0, 300, d["value"])
    assert b["explicit_value"] >= torcor.exact_discrepancy(seq)
    key = torcor.key_inequality_check(seq, 1, 5)
    assert key["holds"] and key["margin"] >= 0
    assert torcor.random_envelope(1, 1000) == pytest.approx(0.1)
    rep = torcor.discrepancy_report(seq, 100, 1, 5)
    assert rep["D_N"] == torcor.exact_discrepancy(seq)


def test_energy():
    assert torcor.additive_energy(list(range(1, 101))) == (2 * 100**3 + 100) // 3
    assert torcor.additive_energy([2**i for i in range(1, 101)]) == 2 * 100 * 100 - 100
    with pytest.raises(ValueError):
        torcor.additive_energy([3, 2])


def test_identity_and_preset(tmp_path):
    seq = torcor.gen_uniform(1, 20)
    r = torcor.fourier_identity_check(seq, 1, 1.0, 20000)
    assert r["holds"]
    assert "identity_check" in torcor.preset_names()
    rep = torcor.run_preset("identity_check", seed=1, tier="small", out_dir=tmp_path)
    assert rep["passed"]
    assert (tmp_path / "report.json").exists()
