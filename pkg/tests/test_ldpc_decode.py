import numpy as np
import pytest

from rllsim.degree import DegreeDistribution
from rllsim.ldpc_decode import DecoderState, decode
from rllsim.peg import build_encoder, peg_construct

from oracles import exhaustive_codebook


def node_dist(vnd, delta, cnd, gamma):
    return DegreeDistribution(list(zip(vnd, delta)), list(zip(cnd, gamma)), "node")


@pytest.fixture(scope="module")
def code84():
    g = peg_construct(node_dist([2, 3], [0.5, 0.5], [5], [1.0]), 8, 0.5, seed=0)
    enc = build_encoder(g)
    book = exhaustive_codebook(g.h_matrix())
    assert enc.k == 4 and len(book) == 16
    return g, enc, book


@pytest.fixture(scope="module")
def code84_girth6():
    # five checks, one redundant row: still an (8,4) code, but girth 6, which
    # keeps flooding BP near the bitwise-MAP decision
    g = peg_construct(node_dist([2], [1.0], [3, 4], [0.8, 0.2]), 8, 0.375, seed=0)
    enc = build_encoder(g)
    book = exhaustive_codebook(g.h_matrix())
    assert enc.k == 4 and len(book) == 16 and g.girth == 6
    return g, enc, book


def test_noiseless_all_zero(code84):
    g, _, _ = code84
    st = DecoderState(g)
    app, ext, hard, ok = decode(st, np.full(8, 10.0), iters=1)
    assert ok and hard.sum() == 0
    np.testing.assert_allclose(app, np.full(8, 10.0) + ext)


def test_bp_matches_bitwise_map_oracle(code84_girth6):
    g, enc, book = code84_girth6
    rng = np.random.default_rng(42)
    trials = 10_000
    ebn0 = 10 ** (4.0 / 10)
    sigma2 = 1.0 / (2 * 0.5 * ebn0)
    sigma = np.sqrt(sigma2)

    msgs = rng.integers(0, 2, size=(trials, enc.k), dtype=np.uint8)
    words = np.array([enc.encode(u) for u in msgs])
    tx = 1.0 - 2.0 * words
    r = tx + sigma * rng.standard_normal(tx.shape)

    # exhaustive bitwise-MAP oracle over the 16 codewords
    signals = 1.0 - 2.0 * book.astype(np.float64)  # (16, 8)
    logp = (r @ signals.T) / sigma2  # (trials, 16)
    logp -= logp.max(axis=1, keepdims=True)
    post = np.exp(logp)
    p1 = post @ book  # unnormalized P(bit=1)
    p0 = post @ (1 - book)
    map_bits = (p1 > p0).astype(np.uint8)

    st = DecoderState(g)
    agree = 0
    for t in range(trials):
        _, _, hard, _ = decode(st, 2 * r[t] / sigma2, iters=20, reset=True)
        agree += int(np.sum(hard == map_bits[t]))
    assert agree / (trials * 8) >= 0.99


def test_min_sum_vs_sum_product_one_iteration(code84):
    g, _, _ = code84
    rng = np.random.default_rng(7)
    llr = rng.normal(0, 3, size=8)
    st_sp, st_ms = DecoderState(g), DecoderState(g)
    decode(st_sp, llr, iters=1, algo="sum-product")
    decode(st_ms, llr, iters=1, algo="min-sum")
    # compare the per-edge check-to-variable messages directly
    assert np.all(np.sign(st_sp.c2v) == np.sign(st_ms.c2v))
    assert np.all(np.abs(st_ms.c2v) >= np.abs(st_sp.c2v) - 1e-12)
    # independent per-check oracle: tanh rule vs min rule
    v2c0 = llr[st_sp.edge_var]
    for c in range(g.n_chk):
        lo, hi = st_sp.chk_ptr[c], st_sp.chk_ptr[c + 1]
        for e in range(lo, hi):
            others = [v2c0[j] for j in range(lo, hi) if j != e]
            t = np.prod(np.tanh(np.array(others) / 2))
            sp_ref = 2 * np.arctanh(np.clip(t, -1 + 1e-15, 1 - 1e-15))
            ms_ref = np.prod(np.sign(others)) * np.min(np.abs(others))
            assert st_sp.c2v[e] == pytest.approx(sp_ref, abs=1e-9)
            assert st_ms.c2v[e] == pytest.approx(ms_ref, abs=1e-12)


def test_pure_function_with_reset(code84):
    g, _, _ = code84
    rng = np.random.default_rng(3)
    llr = rng.normal(0, 2, size=8)
    st = DecoderState(g)
    out1 = decode(st, llr, iters=5, reset=True)
    decode(st, rng.normal(0, 2, size=8), iters=3, reset=False)
    out2 = decode(st, llr, iters=5, reset=True)
    np.testing.assert_array_equal(out1[0], out2[0])


def test_extrinsic_independent_of_own_channel(code84):
    g, _, _ = code84
    rng = np.random.default_rng(11)
    llr = rng.normal(0, 2, size=8)
    st = DecoderState(g)
    _, ext1, _, _ = decode(st, llr, iters=1, reset=True)
    bumped = llr.copy()
    bumped[3] += 5.0
    _, ext2, _, _ = decode(st, bumped, iters=1, reset=True)
    assert ext1[3] == pytest.approx(ext2[3], abs=1e-12)


def test_parity_ok_implies_codeword(code84):
    g, enc, book = code84
    rng = np.random.default_rng(5)
    sigma = 0.8
    st = DecoderState(g)
    seen_ok = 0
    codeset = {tuple(w) for w in book}
    for _ in range(200):
        u = rng.integers(0, 2, enc.k, dtype=np.uint8)
        tx = 1.0 - 2.0 * enc.encode(u)
        r = tx + sigma * rng.standard_normal(8)
        _, _, hard, ok = decode(st, 2 * r / sigma**2, iters=10, reset=True)
        if ok:
            seen_ok += 1
            assert tuple(hard) in codeset
    assert seen_ok > 0


def test_non_reset_messages_persist(code84):
    g, _, _ = code84
    rng = np.random.default_rng(9)
    llr = rng.normal(0, 2, size=8)
    st = DecoderState(g)
    decode(st, llr, iters=2, reset=False)  # first call primes
    c2v_snapshot = st.c2v.copy()
    decode(st, llr, iters=1, reset=False)
    # messages continued from the previous state, not restarted
    st2 = DecoderState(g)
    decode(st2, llr, iters=1, reset=True)
    assert not np.allclose(st.c2v, st2.c2v)
    assert not np.allclose(st.c2v, c2v_snapshot)


def test_nan_rejected(code84):
    g, _, _ = code84
    st = DecoderState(g)
    bad = np.zeros(8)
    bad[0] = np.nan
    with pytest.raises(ValueError):
        decode(st, bad, iters=1)


def test_clipping_bounds_messages(code84):
    g, _, _ = code84
    st = DecoderState(g)
    decode(st, np.full(8, 1e9), iters=3)
    assert np.all(np.abs(st.v2c) <= 50.0)
    assert np.all(np.abs(st.c2v) <= 50.0)
