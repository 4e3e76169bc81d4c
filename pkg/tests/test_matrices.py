import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox.matrices import (
    AffineMap,
    GroupSpec,
    Mat,
    SingularMatrixError,
    affinize,
    embed,
    fixed_points,
    group_membership,
    isometry_audit,
    magnus,
    magnus_eps_pair,
    permutation_matrix,
    rho,
    transcendental_pair,
)
from ultraparadox.sampling import audit_vectors, random_matrix
from ultraparadox.valued_fields import RationalsPadic, power
from ultraparadox.words import Word

Q2, Q3 = RationalsPadic(2), RationalsPadic(3)
small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
mats2 = st.lists(small, min_size=4, max_size=4).map(lambda e: Mat(Q2, [e[:2], e[2:]]))


class TestMat:
    @given(mats2, mats2)
    def test_det_multiplicative(self, A, B):
        assert (A @ B).det() == A.det() * B.det()

    @given(mats2)
    def test_inverse(self, A):
        if A.det().is_zero():
            with pytest.raises(SingularMatrixError):
                A.inverse()
        else:
            assert A @ A.inverse() == Mat.identity(2, Q2)

    def test_det_3x3(self):
        M = Mat(Q2, [[2, 0, 1], [1, 3, 2], [1, 1, 1]])
        assert M.det() == Q2(2 * (3 - 2) - 0 + 1 * (1 - 3))

    def test_trace_of_square(self):
        A1 = magnus(1, Q2)
        assert A1.trace() == Q2(6)
        # tr(M^2) = tr(M)^2 - 2 for unimodular M
        assert (A1 @ A1).trace() == Q2(34)

    def test_rho_matches_products(self):
        A, B = magnus(0, Q2), magnus(1, Q2)
        assert rho(Word.parse("abA"), A, B) == A @ B @ A.inverse()


class TestGenerators:
    def test_magnus_formula(self):
        assert magnus(0, Q2) == Mat(Q2, [[1, 1], [1, 2]])
        assert magnus(3, Q2) == Mat(Q2, [[37, 6], [6, 1]])

    def test_eps_pair_p2(self):
        A, B, (m1, m2) = magnus_eps_pair(power(2, 3), 2)
        assert (m1, m2) == (3, 4)
        assert A == magnus(8, Q2)
        spec = GroupSpec("SL_eps", 2, ring="Z", eps=power(2, 3))
        assert group_membership(A, spec).ok and group_membership(B, spec).ok

    def test_eps_pair_p3(self):
        # |2 * 3^m|_3 < 3^-1 first holds at m = 2
        _, _, (m1, _) = magnus_eps_pair(power(3, 1), 3)
        assert m1 == 2

    def test_transcendental_pair(self, f2s):
        A, B, t = transcendental_pair(f2s, power(2, 1))
        assert t == f2s.gen() ** 2
        assert A.det() == f2s(1) and B.det() == f2s(1)
        assert group_membership(A, GroupSpec("SL_eps", 2, eps=power(2, 1))).ok

    def test_transcendental_needs_function_field(self):
        with pytest.raises(Exception):
            transcendental_pair(Q2)


class TestMembership:
    def test_gl(self):
        assert group_membership(magnus(0, Q2), GroupSpec("GL", 2)).ok
        assert not group_membership(Mat(Q2, [[2, 0], [0, 1]]), GroupSpec("GL", 2)).ok

    def test_sl_eps_diagnostics(self):
        rep = group_membership(magnus(1, Q2), GroupSpec("SL_eps", 2, ring="Z", eps=power(2, 3)))
        assert not rep.ok and rep.diagnostics

    def test_sa_l_translation(self):
        T = AffineMap.translation_by((Q2(1), Q2(0)))
        assert group_membership(T, GroupSpec("SA_L", 2)).ok
        T = AffineMap.translation_by((Q2(Fraction(1, 2)), Q2(0)))
        assert not group_membership(T, GroupSpec("SA_L", 2)).ok

    def test_spec_json(self):
        g = GroupSpec("SL_eps", 3, ring="Z", eps=power(2, 2))
        assert GroupSpec.from_json(g.to_json()) == g


class TestIsometry:
    def test_magnus_is_isometry(self):
        rep = isometry_audit(magnus(1, Q2), audit_vectors(Q2, 2, random.Random(1)))
        assert all(rep.conditions) and rep.consistent

    def test_scaling_is_not(self):
        rep = isometry_audit(Mat(Q2, [[2, 0], [0, 2]]), audit_vectors(Q2, 2, random.Random(1)))
        assert not any(rep.conditions) and rep.counterexample is not None

    @pytest.mark.parametrize("seed", range(5))
    def test_random_consistency(self, seed, f2s):
        rng = random.Random(seed)
        for fld in (Q2, Q3, f2s):
            for _ in range(10):
                n = rng.choice((2, 3))
                M = random_matrix(fld, n, rng)
                assert isometry_audit(M, audit_vectors(fld, n, rng)).consistent


class TestAffine:
    def test_affinize_fixes_anchor(self):
        anchor = (Q2(1), Q2(3))
        S, T = affinize([magnus(0, Q2), magnus(1, Q2)], anchor)
        assert S(anchor) == anchor and T(anchor) == anchor
        fp = fixed_points(S)
        assert fp.kind == "unique" and fp.point == anchor

    def test_affinize_rejects_unipotent(self):
        with pytest.raises(ValueError):
            affinize([Mat(Q2, [[1, 1], [0, 1]])], (Q2(1), Q2(0)))

    def test_composition_and_inverse(self):
        S = AffineMap(magnus(0, Q2), (Q2(1), Q2(-2)))
        x = (Q2(Fraction(1, 3)), Q2(5))
        assert S.inverse()(S(x)) == x
        assert (S @ S)(x) == S(S(x))

    def test_fixed_points_kinds(self):
        assert fixed_points(AffineMap(magnus(0, Q2))).kind == "none_nonzero"
        assert fixed_points(AffineMap.translation_by((Q2(1), Q2(0)))).kind == "none_nonzero"
        sub = fixed_points(AffineMap(Mat(Q2, [[1, 1], [0, 1]])))
        assert sub.kind == "subspace" and sub.contains((Q2(5), Q2(0)))
        assert not sub.contains((Q2(5), Q2(1)))


class TestEmbeddings:
    def test_corner(self):
        M = embed(magnus(0, Q2), 3, "corner")
        assert M.linear == Mat(Q2, [[1, 1, 0], [1, 2, 0], [0, 0, 1]])

    def test_diagonal(self):
        M = embed(magnus(0, Q2), 4, "diagonal")
        x = tuple(Q2(v) for v in (1, 2, 3, 4))
        assert M(x) == (Q2(3), Q2(5), Q2(7), Q2(11))

    def test_shifted(self):
        A = magnus(0, Q2)
        x = tuple(Q2(v) for v in (1, 2, 3))
        assert embed(A, 3, "shifted1")(x) == (Q2(3), Q2(5), Q2(3))
        assert embed(A, 3, "shifted2")(x) == (Q2(1), Q2(5), Q2(8))

    def test_diagonal_needs_even(self):
        with pytest.raises(ValueError):
            embed(magnus(0, Q2), 3, "diagonal")

    def test_permutation_conjugation(self):
        gamma = [2, 1, 0]
        P = permutation_matrix(Q2, gamma)
        V = embed(magnus(0, Q2), 3, "corner")
        M = embed(V, 3, "permutation", gamma)
        assert M.linear == P @ V.linear @ P.inverse()
