"""Tests for Zariski decompositions and piecewise linear surface bodies."""

import random
from fractions import Fraction

import pytest

from okbody.convbody import RationalPolytope, okounkov_body
from okbody.errors import InputError
from okbody.flagval import Flag
from okbody.glseries import GradedSeries
from okbody.polyform import HomogeneousForm, all_exponents
from okbody.surfacezar import (
    SurfaceLattice,
    classify_boundary,
    mu,
    surface_body,
    volume,
    zariski,
)

F = Fraction

H, E = (1, 0), (0, 1)


@pytest.fixture
def p2():
    return SurfaceLattice([[1]], [], [(1,)])


@pytest.fixture
def blowup():
    # one-point blow-up: basis H, E with E the exceptional curve
    return SurfaceLattice([[1, 0], [0, -1]], [E], [(1, -1), (0, 1)])


@pytest.fixture
def chain():
    # two infinitely near points: A the strict transform of the first
    # exceptional curve (self-intersection -2), B the second (-1)
    A, B, L = (0, 1, -1), (0, 0, 1), (1, -1, -1)
    return SurfaceLattice(
        [[1, 0, 0], [0, -1, 0], [0, 0, -1]], [A, B], [A, B, L]
    )


class TestLattice:
    def test_sign_conventions(self, blowup):
        assert blowup.dot(E, E) == -1
        assert blowup.dot(H, E) == 0
        assert blowup.dot((2, -3), E) == 3
        assert blowup.dot((1, -1), (1, -1)) == 0

    def test_validation(self):
        with pytest.raises(InputError):
            SurfaceLattice([[1, 0], [1, -1]], [], [(1, 0)])  # not symmetric
        with pytest.raises(InputError):
            SurfaceLattice([[1]], [(1,)], [(1,)])  # curve with positive square
        with pytest.raises(InputError):
            SurfaceLattice([[1]], [], [])  # no effective generators

    def test_pseudoeffective(self, blowup):
        assert blowup.is_pseudoeffective((2, 3))
        assert blowup.is_pseudoeffective((2, -2))
        assert not blowup.is_pseudoeffective((2, -3))
        assert not blowup.is_pseudoeffective((-1, 0))


class TestZariski:
    def test_nef_divisor(self, blowup):
        z = zariski(blowup, (2, -1))
        assert z.positive == (F(2), F(-1))
        assert z.negative == ()
        z.check(blowup)

    def test_exceptional_overload(self, blowup):
        z = zariski(blowup, (2, 3))
        assert z.positive == (F(2), F(0))
        assert z.negative == ((tuple(map(F, E)), F(3)),)
        assert z.multiplicity(E) == 3
        assert z.negative_class() == (F(0), F(3))
        z.check(blowup)

    def test_not_pseudoeffective(self, blowup):
        with pytest.raises(InputError):
            zariski(blowup, (2, -3))

    def test_insufficient_curve_list(self):
        bare = SurfaceLattice([[1, 0], [0, -1]], [], [(1, -1), (0, 1)])
        with pytest.raises(InputError, match="insufficient"):
            zariski(bare, (2, 3))

    def test_cascading_support(self, chain):
        # D . B < 0 starts the support at B; clearing B drags A in
        z = zariski(chain, (1, 1, 1))
        assert z.positive == (F(1), F(0), F(0))
        assert z.multiplicity((0, 1, -1)) == 1
        assert z.multiplicity((0, 0, 1)) == 2
        z.check(chain)

    def test_joint_start(self, chain):
        z = zariski(chain, (1, 2, 1))
        assert z.positive == (F(1), F(0), F(0))
        assert z.multiplicity((0, 1, -1)) == 2
        assert z.multiplicity((0, 0, 1)) == 3
        z.check(chain)

    def test_uniqueness_under_permutation(self, chain):
        permuted = SurfaceLattice(
            [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
            [(0, 0, 1), (0, 1, -1)],
            [(1, -1, -1), (0, 0, 1), (0, 1, -1)],
        )
        for D in [(1, 1, 1), (1, 2, 1), (2, 1, 0), (3, -1, -1)]:
            a = zariski(chain, D)
            b = zariski(permuted, D)
            assert a.positive == b.positive
            assert dict(a.negative) == dict(b.negative)

    def test_randomized_invariants(self, blowup):
        # seeded pseudo-effective classes: nonnegative combinations of the
        # effective generators, rechecked against all four invariants
        rng = random.Random(701)
        done = 0
        while done < 10:
            a, b = rng.randint(0, 9), rng.randint(0, 9)
            if a == b == 0:
                continue
            D = (a, b - a)  # a(H-E) + bE
            z = zariski(blowup, D)
            z.check(blowup)
            assert tuple(
                p + n for p, n in zip(z.positive, z.negative_class())
            ) == tuple(map(F, D))
            done += 1

    def test_volume(self, blowup):
        assert volume(blowup, (3, -1)) == 8
        assert volume(blowup, (2, 3)) == 4  # positive part 2H
        assert volume(blowup, (1, -1)) == 0


class TestMu:
    def test_projective_plane(self, p2):
        assert mu(p2, (2,), (1,)) == 2

    def test_blowup_thresholds(self, blowup):
        assert mu(blowup, (3, -1), (1, -1)) == 3
        assert mu(blowup, (3, -1), (1, 0)) == 2
        assert mu(blowup, (2, 0), (1, -1)) == 2

    def test_not_big(self, blowup):
        with pytest.raises(InputError, match="not big"):
            mu(blowup, (1, -1), (0, 1))

    def test_curve_not_effective(self, blowup):
        with pytest.raises(InputError, match="effective"):
            mu(blowup, (2, 0), (0, -1))


class TestSurfaceBody:
    def test_plane_conic(self, p2):
        body = surface_body(p2, (2,), (1,))
        assert body.mu == 2
        assert len(body.segments) == 1
        assert body.alpha(0) == 0 and body.alpha(2) == 0
        assert [body.beta(t) for t in (0, 1, 2)] == [2, 1, 0]
        assert body.area() == 2
        assert body.polytope() == RationalPolytope.from_points(
            [(0, 0), (2, 0), (0, 2)]
        )

    def test_support_enters_at_zero(self, blowup):
        body = surface_body(blowup, (2, 0), (1, -1))
        assert body.mu == 2
        assert len(body.segments) == 1
        assert body.segments[0].support == (0,)
        assert body.alpha(1) == 0
        assert body.beta(0) == 2 and body.beta(2) == 0
        assert body.area() == 2

    def test_point_multiplicity_shifts_lower_edge(self, blowup):
        body = surface_body(blowup, (2, 0), (1, -1), {E: 1})
        assert body.alpha(1) == 1 and body.alpha(2) == 2
        assert body.beta(0) == 2 and body.beta(2) == 2
        assert body.area() == 2
        assert body.polytope() == RationalPolytope.from_points(
            [(0, 0), (0, 2), (2, 2)]
        )
        assert body.point_multiplicities == ((tuple(map(F, E)), 1),)

    def test_interior_breakpoint(self, blowup):
        body = surface_body(blowup, (3, -1), (1, -1))
        assert body.breakpoints == (F(0), F(1), F(3))
        assert body.segments[0].support == ()
        assert body.segments[1].support == (0,)
        assert body.beta(0) == 2 and body.beta(1) == 2 and body.beta(3) == 0
        assert body.area() == 4
        assert body.polytope() == RationalPolytope.from_points(
            [(0, 0), (3, 0), (1, 2), (0, 2)]
        )

    def test_breakpoint_with_multiplicity(self, blowup):
        body = surface_body(blowup, (3, -1), (1, -1), {E: 1})
        assert body.alpha(1) == 0 and body.alpha(2) == 1 and body.alpha(3) == 2
        assert body.beta(3) == 2
        assert body.area() == 4

    def test_nef_everywhere(self, blowup):
        body = surface_body(blowup, (3, -1), (1, 0))
        assert body.mu == 2
        assert body.area() == 4
        assert body.polytope() == RationalPolytope.from_points(
            [(0, 0), (2, 0), (2, 1), (0, 3)]
        )

    def test_narrow_then_shrinking(self, blowup):
        body = surface_body(blowup, (2, -1), (1, -1))
        assert body.breakpoints == (F(0), F(1), F(2))
        assert body.beta(0) == 1
        assert body.area() == F(3, 2)

    def test_flag_curve_in_support_refused(self, blowup):
        with pytest.raises(InputError, match="replace D"):
            surface_body(blowup, (2, 3), (0, 1))

    def test_area_invariant_under_point_choice(self, blowup):
        # moving x along C changes alpha and beta but never the area
        for D, C in [((2, 0), (1, -1)), ((3, -1), (1, -1))]:
            generic = surface_body(blowup, D, C)
            special = surface_body(blowup, D, C, {E: 1})
            assert generic.area() == special.area()

    def test_toric_cross_check_plane(self, p2):
        # conics on the plane against the lattice engine
        body = surface_body(p2, (2,), (1,))
        rep = okounkov_body(GradedSeries.complete(2, 2), Flag.standard(2), 5)
        assert body.polytope() == rep.body
        assert body.area() == rep.body.volume()

    def test_toric_cross_check_blowup(self, blowup):
        # cubics through a point: degree-3 monomials vanishing at (1:0:0)
        # generate the series of 3H - E; flag curve H avoids the point
        exps = [
            e for e in all_exponents(3, 3) if e[1] + e[2] >= 1
        ]
        gens = [HomogeneousForm.monomial(3, e) for e in exps]
        S = GradedSeries.generated(2, 3, gens, label="cubics-through-point")
        rep = okounkov_body(S, Flag.standard(2), 5)
        body = surface_body(blowup, (3, -1), (1, 0))
        assert body.polytope() == rep.body
        assert body.area() == rep.body.volume()


class TestClassification:
    def test_strata_of_plane_body(self, p2):
        body = surface_body(p2, (2,), (1,))
        strata = classify_boundary(body)
        names = [s.name for s in strata]
        assert names == [
            "interior",
            "left-edge",
            "lower-graph",
            "upper-graph",
            "right-edge",
        ]
        d = {s.name: s for s in strata}
        assert d["interior"].valuative is True
        assert d["left-edge"].valuative is True and d["left-edge"].open_end
        assert d["lower-graph"].valuative is True and d["lower-graph"].open_end
        assert d["upper-graph"].valuative is None
        assert d["right-edge"].valuative is None
        assert d["right-edge"].start == (F(2), F(0))
        assert d["right-edge"].end == (F(2), F(0))

    def test_upper_graph_openness_tracks_left_corner(self, blowup):
        # alpha(0) < beta(0) here, so the upper graph starts closed
        body = surface_body(blowup, (3, -1), (1, -1))
        d = {s.name: s for s in classify_boundary(body)}
        assert not d["upper-graph"].open_start
        assert d["left-edge"].start == (F(0), F(0))
        assert d["left-edge"].end == (F(0), F(2))

    def test_strata_carry_exact_anchors(self, blowup):
        body = surface_body(blowup, (3, -1), (1, 0))
        d = {s.name: s for s in classify_boundary(body)}
        assert d["lower-graph"].end == (F(2), F(0))
        assert d["upper-graph"].start == (F(0), F(3))
        assert d["upper-graph"].end == (F(2), F(1))
