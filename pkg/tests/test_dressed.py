import pytest

from lambdacomb.dressed import (
    EIGEN,
    comb_to_json,
    predict_rational_comb,
    predict_resonances,
)


def freqs(comb):
    return [round(f, 6) for f in comb.frequencies()]


def test_fig3_combination_comb():
    comb = predict_resonances(11.0, 1.0, 3, "fig3")
    assert freqs(comb) == [12.0, 10.0, 6.0, 5.0, 4.0, round(10.0 / 3.0, 6)]
    kinds = {(e.kind, e.n): e.frequency for e in comb.entries}
    assert kinds[("sum", 1)] == 12.0
    assert kinds[("difference", 1)] == 10.0


def test_fig3_comb_degenerates_to_fig2_at_zero_rabi():
    a = predict_resonances(11.0, 0.0, 2, "fig3")
    b = predict_resonances(11.0, 0.0, 2, "fig2")
    assert freqs(a) == freqs(b) == [11.0, 5.5]


def test_degenerate_difference_dropped():
    comb = predict_resonances(10.0, 10.0, 2, "fig3")
    assert 0.0 not in comb.frequencies()
    assert freqs(comb) == [20.0, 10.0]


def test_min_frequency_drops_unresolvable_entries():
    comb = predict_resonances(10.0, 9.9, 3, "fig3", min_frequency=0.5)
    assert min(comb.frequencies()) > 0.5
    assert round(10.0 - 9.9, 6) not in [round(f, 6) for f in comb.frequencies()]


def test_fig2_subharmonic_comb():
    comb = predict_resonances(11.0, 0.0, 4, "fig2")
    assert freqs(comb) == [11.0, 5.5, round(11 / 3, 6), 2.75]
    assert all(e.kind == EIGEN for e in comb.entries)


def test_rational_comb_includes_paper_fractions():
    comb = predict_rational_comb(11.0, 2, 5)
    f = freqs(comb)
    assert round(11.0 / 2, 6) in f
    assert round(22.0 / 5, 6) in f
    assert round(22.0 / 3, 6) in f
    assert 11.0 in f


def test_rational_comb_m1_is_plain_subharmonics():
    comb = predict_rational_comb(11.0, 1, 3)
    assert freqs(comb) == [11.0, 5.5, round(11 / 3, 6)]


def test_rational_comb_excludes_unreduced_fractions():
    comb = predict_rational_comb(11.0, 2, 4)
    pairs = [(e.m, e.n) for e in comb.entries]
    assert (2, 4) not in pairs
    assert (1, 2) in pairs
    assert (2, 3) in pairs


def test_entries_sorted_descending_no_duplicates():
    comb = predict_rational_comb(7.0, 3, 7)
    f = comb.frequencies()
    assert all(f[i] > f[i + 1] + 1e-9 for i in range(len(f) - 1))
    assert all(e.frequency > 0 for e in comb.entries)


def test_labels_are_lowest_terms():
    comb = predict_rational_comb(9.0, 4, 6)
    import math

    for e in comb.entries:
        assert math.gcd(e.m, e.n) == 1


def test_invalid_arguments():
    with pytest.raises(ValueError):
        predict_resonances(11.0, 1.0, 0, "fig3")
    with pytest.raises(ValueError):
        predict_resonances(11.0, 1.0, 2, "figX")
    with pytest.raises(ValueError):
        predict_rational_comb(11.0, 0, 3)


def test_json_round_trip_fields():
    comb = predict_resonances(11.0, 1.0, 2, "fig3")
    data = comb_to_json(comb)
    assert {"frequency", "base", "m", "n", "kind"} <= set(data[0])
