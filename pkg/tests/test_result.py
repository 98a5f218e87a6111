import numpy as np

from afclip.result import ClipKind, ClipResult, Mode, T_TOL, as_mode, batches_agree, classify, results_agree


def test_classify_kinds():
    b = classify([1.0, 2.0, 0.0, np.nan], [3.0, 2.0 + 1e-12, 0.0, np.nan], [0, 1, 2, -1], [4, 5, 6, -1],
                 Mode.LINE, [True, True, True, False])
    assert list(b.kind) == [ClipKind.SEGMENT, ClipKind.POINT, ClipKind.POINT, ClipKind.EMPTY]
    assert b.t_in[1] == b.t_out[1]
    assert np.isnan(b.t_in[3]) and b.entry_facet[3] == -1


def test_classify_segment_mode_clamps():
    b = classify([-1.0, 0.2, 1.5], [0.5, 3.0, 2.0], [1, 2, 3], [4, 5, 6], "segment")
    assert list(b.kind) == [ClipKind.SEGMENT, ClipKind.SEGMENT, ClipKind.EMPTY]
    assert (b.t_in[0], b.entry_facet[0]) == (0.0, -1)
    assert (b.t_out[1], b.exit_facet[1]) == (1.0, -1)


def test_agreement_rules():
    seg = ClipResult(ClipKind.SEGMENT, 1.0, 2.0)
    assert results_agree(seg, ClipResult(ClipKind.SEGMENT, 1.0 + 1e-12, 2.0))
    assert not results_agree(seg, ClipResult(ClipKind.SEGMENT, 1.1, 2.0))
    assert not results_agree(seg, ClipResult.empty())
    assert results_agree(ClipResult.empty(), ClipResult.empty())
    pt = ClipResult(ClipKind.POINT, 1.0, 1.0)
    assert results_agree(pt, ClipResult(ClipKind.SEGMENT, 1.0, 1.0 + 0.5 * T_TOL))
    assert not results_agree(pt, seg)


def test_batches_agree_matches_scalar():
    rng = np.random.default_rng(0)
    t = rng.normal(size=(2, 200))
    t_in, t_out = np.minimum(*t), np.maximum(*t)
    t_out[::7] = t_in[::7]
    b1 = classify(t_in, t_out, np.zeros(200), np.zeros(200), Mode.LINE, rng.random(200) < 0.8)
    b2 = classify(t_in + rng.normal(size=200) * 1e-10 * (rng.random(200) < 0.5), t_out, np.zeros(200),
                  np.zeros(200), Mode.LINE, rng.random(200) < 0.8)
    want = [results_agree(b1.result(i), b2.result(i)) for i in range(200)]
    assert list(batches_agree(b1, b2)) == want


def test_mode_parsing():
    assert as_mode("LINE") is Mode.LINE and as_mode(Mode.SEGMENT) is Mode.SEGMENT
