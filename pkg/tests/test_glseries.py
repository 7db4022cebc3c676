"""Graded series construction, derived series, and dimension data tests."""

import math
from fractions import Fraction as F

import pytest

from okbody.errors import InputError, TruncationError
from okbody.flagval import Flag
from okbody.glseries import GradedSeries
from okbody.polyform import FormSpan, HomogeneousForm as HF


def mono(e):
    return HF.monomial(len(e), e)


def no_x2x3_series():
    gens = [mono(e) for e in [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 0, 2)]]
    return GradedSeries.generated(2, 2, gens, label="no-x2x3")


def test_complete_series_dimensions():
    C = GradedSeries.complete(2)
    assert C.dims(4) == [3, 6, 10, 15]
    C2 = GradedSeries.complete(2, 2)
    assert C2.dims(3) == [6, 15, 28]
    C1 = GradedSeries.complete(1, 1)
    assert C1.dims(5) == [2, 3, 4, 5, 6]


def test_complete_series_is_generated_in_level_one():
    C = GradedSeries.complete(2, 2)
    assert C.generators is not None and set(C.generators) == {1}
    G = GradedSeries.generated(2, 2, list(C.generators[1]))
    assert G.dims(3) == C.dims(3)
    assert G.level(2) == C.level(2)


def test_generated_series_known_dimensions():
    # all degree 2 monomials except X2*X3: the only unreachable exponents
    # in degree 2k are (0, odd, odd), one per level, giving 2k^2 + 2k + 1
    S = no_x2x3_series()
    assert S.dims(4) == [5, 13, 25, 41]
    for k in (1, 2, 3):
        assert S.level(k).dim == 2 * k * k + 2 * k + 1
        missing = mono((0, 2 * k - 1, 1))
        assert not S.level(k).contains(missing)


def test_generated_series_with_level_gaps():
    # a single generator in level 2 leaves odd levels empty
    S = GradedSeries.generated(1, 1, {2: [mono((1, 1))]})
    assert S.dims(4) == [0, 1, 0, 1]


def test_mixed_level_generators():
    # X1 in level 1 plus X2^2 in level 2
    S = GradedSeries.generated(
        1, 1, {1: [mono((1, 0))], 2: [mono((0, 2))]}
    )
    assert S.dims(4) == [1, 2, 2, 3]
    assert S.level(2).pivots == ((0, 2), (2, 0))


def test_hilbert_data_stabilizes():
    S = no_x2x3_series()
    hd = S.hilbert_data(5)
    assert hd.dims == [5, 13, 25, 41, 61]
    assert hd.stabilized and hd.volume == 4
    assert not S.hilbert_data(4).stabilized

    C = GradedSeries.complete(2)
    assert C.hilbert_data(5).volume == 1
    assert GradedSeries.complete(2, 2).hilbert_data(5).volume == 4
    assert GradedSeries.complete(1, 3).hilbert_data(4).volume == 3


def test_hilbert_data_not_stabilized_on_sparse_series():
    S = GradedSeries.generated(1, 1, {2: [mono((1, 1))]})
    hd = S.hilbert_data(6)
    assert not hd.stabilized and hd.volume is None


def test_semigroup_level_sizes_match_dims():
    S = no_x2x3_series()
    for flag in (Flag.standard(2), Flag.random(2, 3), Flag.random(2, 8)):
        sg = S.semigroup(flag, 3)
        assert [len(sg.level(k)) for k in (1, 2, 3)] == S.dims(3)


def test_semigroup_standard_values():
    S = no_x2x3_series()
    sg = S.semigroup(Flag.standard(2), 2)
    assert set(sg.level(1)) == {(0, 0), (1, 0), (1, 1), (0, 2), (2, 0)}
    assert sg.group_index() == 1


def test_semigroup_additivity_spot_check():
    # value points add: nu(s t) = nu(s) + nu(t) for monomial spans
    S = no_x2x3_series()
    sg = S.semigroup(Flag.standard(2), 4)
    lv1 = set(sg.level(1))
    lv2 = set(sg.level(2))
    for a in lv1:
        for b in lv1:
            assert tuple(x + y for x, y in zip(a, b)) in lv2


def test_under_flag_view_cached_and_shaped():
    S = no_x2x3_series()
    fl = Flag.random(2, 7)
    assert S.under_flag(fl) is S.under_flag(Flag.random(2, 7))
    assert S.under_flag(Flag.standard(2)) is S
    view = S.under_flag(fl)
    assert view.dims(2) == S.dims(2)
    # transformed generators are recorded on the view
    assert view.generators is not None
    assert len(view.generators[1]) == 5


def test_complete_level_shortcut_under_flag():
    C = GradedSeries.complete(2)
    fl = Flag.random(2, 4)
    view = C.under_flag(fl)
    assert view.level(2) is C.level(2)


def test_veronese():
    C = GradedSeries.complete(2)
    V = C.veronese(2)
    assert V.twist == 2
    assert V.dims(2) == [6, 15]
    assert C.veronese(1) is C
    with pytest.raises(InputError):
        C.veronese(0)


def test_vanishing_along_flag_divisor():
    C = GradedSeries.complete(2)
    sub = C.vanishing_along_flag_divisor(F(1, 2))
    assert sub.dims(4) == [1, 3, 3, 6]
    for k in (1, 2, 3, 4):
        need = math.ceil(F(1, 2) * k)
        assert all(e[0] >= need for f in sub.level(k).basis for e in f.terms)
    assert C.vanishing_along_flag_divisor(0) is C
    with pytest.raises(InputError):
        C.vanishing_along_flag_divisor(F(-1, 2))


def test_subtract_flag_divisor():
    # removing one hyperplane from O(2) leaves O(1): divide the sections
    # with a full power of the first variable by that power
    C = GradedSeries.complete(2, 2)
    sub = C.subtract_flag_divisor(1)
    assert sub.twist == 1
    assert sub.dims(3) == [3, 6, 10]
    assert sub.level(1) == FormSpan.complete(3, 1)
    assert C.subtract_flag_divisor(0) is C
    with pytest.raises(InputError):
        C.subtract_flag_divisor(-1)
    with pytest.raises(InputError):
        C.subtract_flag_divisor(F(1, 2))
    with pytest.raises(InputError):
        C.subtract_flag_divisor(2)


def test_restrict_to_flag_divisor():
    C = GradedSeries.complete(2)
    R = C.restrict_to_flag_divisor()
    assert R.d == 1 and R.dims(3) == [2, 3, 4]
    assert R.level(2) == FormSpan.complete(2, 2)
    with pytest.raises(InputError):
        R.restrict_to_flag_divisor()


def test_puncture():
    C = GradedSeries.complete(2)
    P = C.puncture([1, 1, 1])
    assert P.dims(3) == [2, 5, 9]
    pt = [F(1), F(1), F(1)]
    assert all(f.evaluate(pt) == 0 for f in P.level(2).basis)
    with pytest.raises(InputError):
        C.puncture([0, 0, 0])
    with pytest.raises(InputError):
        C.puncture([1, 0])


def test_fujita_subseries():
    C = GradedSeries.complete(2)
    FU = C.fujita_subseries(2)
    assert FU.twist == 2 and FU.dims(2) == [6, 15]
    S = no_x2x3_series()
    F1 = S.fujita_subseries(1)
    assert F1.dims(3) == S.dims(3)


def test_explicit_series_truncation():
    x = HF.variable(3, 0)
    E = GradedSeries.explicit(2, 1, {1: [x], 2: [x * x]})
    assert E.max_level == 2
    assert E.dims(2) == [1, 1]
    with pytest.raises(TruncationError):
        E.level(3)
    with pytest.raises(TruncationError):
        E.dims(3)


def test_explicit_series_gap_levels_are_zero():
    x = HF.variable(3, 0)
    E = GradedSeries.explicit(2, 1, {3: [x * x * x]})
    assert E.dims(3) == [0, 0, 1]


def test_validate_multiplicative():
    no_x2x3_series().validate_multiplicative(4)
    GradedSeries.complete(2).validate_multiplicative(3)
    x, y = HF.variable(3, 0), HF.variable(3, 1)
    bad = GradedSeries.explicit(2, 1, {1: [x], 2: [y * y]})
    with pytest.raises(InputError):
        bad.validate_multiplicative(2)


def test_level_guards():
    C = GradedSeries.complete(2)
    with pytest.raises(InputError):
        C.level(0)
    with pytest.raises(InputError):
        C.level(-1)
    with pytest.raises(InputError):
        GradedSeries.generated(2, 1, [])
    with pytest.raises(InputError):
        GradedSeries.generated(2, 1, {1: [HF.zero(3)]})
