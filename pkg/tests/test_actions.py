"""Tests for the operator family on movies: half-Witt, sl2, p-DG.

The structural identities (commutators, sl2 relations, the dictionary
between the two families) are checked symbolically on formal sums; the
evaluation compatibility checks compare against the independent closed-foam
evaluation, both summed and coloring by coloring.
"""

from fractions import Fraction

import pytest

from foamlab.actions import (
    ActionParams,
    FoamSum,
    act_pdg,
    act_sl2,
    act_witt,
    colored_compat_check,
    commutator_check,
    half_scalar,
    pdg_iterate,
    sl2_from_witt,
    sl2_relations_check,
    verify_compat,
    witt_act_ratfun,
)
from foamlab.corpus import basic_open_movies, closed_corpus, spherical_corpus
from foamlab.errors import (
    CharTwoNonSpherical,
    InputError,
    NonSphericalWithNu3,
    TwoNotInvertible,
    WrongRing,
)
from foamlab.foamcore import MovieBuilder, compose, compile_movie
from foamlab.foameval import degree, evaluate
from foamlab.polyring import (
    GF,
    MultiPoly,
    QQ,
    RatFun,
    WittSequence,
    ZZ,
    symmetric_basis,
    xvars,
)

INDICES = (-1, 0, 1, 2, 3)


def rich_pack(ring=QQ, N=3, **kw):
    kw.setdefault("s", Fraction(1, 4))
    kw.setdefault("nu1", WittSequence.linear(ring, Fraction(1, 2)))
    kw.setdefault("nu2", WittSequence.linear(ring, Fraction(-1, 3)))
    kw.setdefault("nu3", WittSequence.linear(ring, Fraction(1, 5)))
    return ActionParams(ring=ring, N=N, **kw)


def saddle_pack(ring=QQ, N=3, **kw):
    kw.setdefault("s", Fraction(1, 4))
    kw.setdefault("nu1", WittSequence.linear(ring, Fraction(1, 2)))
    kw.setdefault("nu2", WittSequence.linear(ring, Fraction(-1, 3)))
    return ActionParams(ring=ring, N=N, spherical=False, **kw)


PARAM_PACKS = [
    rich_pack(),
    rich_pack(s=Fraction(-2, 7), nu1=WittSequence.zero(QQ),
              nu2=WittSequence.linear(QQ, 3), nu3=WittSequence.linear(QQ, Fraction(-1, 2))),
    rich_pack(s=0, nu1=WittSequence.linear(QQ, Fraction(5, 6)),
              nu2=WittSequence.linear(QQ, Fraction(5, 6)), nu3=WittSequence.zero(QQ)),
]


def dotted_sphere(power=1, thickness=1):
    b = MovieBuilder()
    c = b.cup(thickness)
    b.decorate(
        c,
        symmetric_basis(
            "power_sum", power, ZZ, tuple(f"x{i}" for i in range(1, thickness + 1))
        ),
    )
    b.cap(c)
    return b.movie()


class TestActionParams:
    def test_defaults_fill_zero_sequences(self):
        P = ActionParams(ring=QQ, N=2)
        assert P.nu1.is_identically_zero()
        assert P.t3 == Fraction(1, 2)

    def test_bad_sequence_rejected(self):
        bad = WittSequence.from_table(QQ, [0, 1, 1, 1])
        with pytest.raises(InputError):
            ActionParams(ring=QQ, N=2, nu1=bad)

    def test_table_sequence_accepted_when_linear(self):
        seq = WittSequence.from_table(QQ, [0, 2, 4, 6, 8, 10])
        P = ActionParams(ring=QQ, N=2, nu1=seq)
        assert P.nu1(2) == 6

    def test_nonspherical_requires_zero_nu3(self):
        with pytest.raises(NonSphericalWithNu3):
            ActionParams(
                ring=QQ, N=2, nu3=WittSequence.linear(QQ, 1), spherical=False
            )

    def test_nonspherical_requires_half(self):
        with pytest.raises(TwoNotInvertible):
            ActionParams(ring=ZZ, N=2, spherical=False)

    def test_nonspherical_pins_t3(self):
        with pytest.raises(InputError):
            ActionParams(ring=QQ, N=2, t3=1, spherical=False)

    def test_sl2_from_witt_dictionary_values(self):
        P = sl2_from_witt(ActionParams(ring=QQ, N=2))
        assert (P.t1, P.t2, P.t3) == (0, 0, Fraction(1, 2))
        Q = sl2_from_witt(rich_pack())
        assert Q.t1 == Fraction(1, 2) * 2 + Fraction(1, 4)
        assert Q.t3 == Fraction(1, 5) * 2 + Fraction(1, 2)

    def test_sl2_from_witt_needs_half(self):
        with pytest.raises(TwoNotInvertible):
            sl2_from_witt(ActionParams(ring=ZZ, N=2))


class TestFoamSum:
    def test_round_trip_of_plain_movie(self):
        P = rich_pack(N=2)
        mov = dotted_sphere(2)
        S = FoamSum.from_movie(mov, P)
        assert len(S) == 1
        (coef, rebuilt), = list(S.movies())
        assert coef == 1
        assert evaluate(rebuilt, 2, QQ).value == evaluate(mov, 2, QQ).value

    def test_merge_cancels(self):
        P = rich_pack(N=2)
        S = FoamSum.from_movie(dotted_sphere(1), P)
        assert (S - S).is_zero()
        assert (S.scale(3) - S - S - S).is_zero()

    def test_value_of_scaled_sum(self):
        P = rich_pack(N=2)
        S = FoamSum.from_movie(dotted_sphere(1), P).scale(Fraction(5, 2))
        assert S.value() == MultiPoly.const(QQ, xvars(2), Fraction(-5, 2))

    def test_thickness_beyond_N_rejected(self):
        P = rich_pack(N=1)
        with pytest.raises(InputError):
            FoamSum.from_movie(dotted_sphere(1, thickness=2), P)


class TestWittCommutators:
    @pytest.mark.parametrize("pack_idx", [0, 1, 2])
    @pytest.mark.parametrize("ab", [(1, 1), (1, 2)])
    def test_basic_movies_all_index_pairs(self, pack_idx, ab):
        P = PARAM_PACKS[pack_idx]
        Psad = ActionParams(ring=QQ, N=3, s=P.s, nu1=P.nu1, nu2=P.nu2)
        for name, mov in basic_open_movies(*ab).items():
            pack = Psad if name == "saddle" else P
            for n in INDICES:
                for m in INDICES:
                    rep = commutator_check(n, m, pack, mov)
                    assert rep.ok, (name, n, m, rep.detail)

    def test_commutator_on_closed_decorated_movie(self):
        P = rich_pack(N=2)
        for n, m in [(1, -1), (2, 1), (3, -1)]:
            rep = commutator_check(n, m, P, dotted_sphere(2))
            assert rep.ok, rep.detail

    def test_minus_one_kills_cup(self):
        P = rich_pack(N=2)
        mov = basic_open_movies()["cup"]
        assert act_witt(-1, P, mov).is_zero()

    def test_decoration_leibniz_matches_polynomial_derivation(self):
        # on a single decorated facet the operator is the plain derivation
        from foamlab.polyring import witt_act

        P = ActionParams(ring=QQ, N=3)  # all move images vanish
        mov = basic_open_movies()["decorate"]
        dec = mov.moves[0].poly
        for n in INDICES:
            S = act_witt(n, P, mov)
            img = witt_act(n, dec.poly)
            if img.is_zero():
                assert S.is_zero()
                continue
            total = MultiPoly.zero(QQ, dec.poly.vars)
            for coef, m2 in S.movies():
                d2 = compile_movie(m2).facets["f1"].decorations
                part = MultiPoly.const(QQ, dec.poly.vars, 1)
                for sym in d2:
                    ext = sym.poly
                    if ext.vars != dec.poly.vars:
                        ext = MultiPoly(
                            QQ, dec.poly.vars,
                            {e[: len(dec.poly.vars)]: c for e, c in ext.terms.items()},
                        )
                    part = part * ext
                total = total + part * coef
            assert total == img.map_coefficients(QQ, QQ.normalize)


class TestGrading:
    def test_witt_shifts_degree_by_2n(self):
        P = rich_pack(N=3)
        for mov in spherical_corpus(seed=53, count=4):
            d = degree(mov, 3)
            for n in INDICES:
                for coef, m2 in act_witt(n, P, mov).movies():
                    assert degree(m2, 3) == d + 2 * n

    def test_sl2_grading(self):
        P = ActionParams(ring=QQ, N=2, t1=Fraction(1, 3), t2=Fraction(1, 7))
        shifts = {"e": -2, "h": 0, "f": 2}
        for mov in spherical_corpus(seed=61, count=4):
            d = degree(mov, 2)
            for g, shift in shifts.items():
                for coef, m2 in act_sl2(g, P, mov).movies():
                    assert degree(m2, 2) == d + shift


class TestLeibnizOverComposition:
    def test_witt_action_splits_over_compose(self):
        P = rich_pack(N=2)
        parts = basic_open_movies()
        a = parts["cup"]
        b = parts["cap"]
        whole = compose(a, b)
        for n in (0, 1, 2):
            lhs = act_witt(n, P, whole)
            rhs = None
            for coef, m1 in act_witt(n, P, a).movies():
                piece = FoamSum.from_movie(compose(m1, b), P).scale(coef)
                rhs = piece if rhs is None else rhs + piece
            for coef, m2 in act_witt(n, P, b).movies():
                piece = FoamSum.from_movie(compose(a, m2), P).scale(coef)
                rhs = piece if rhs is None else rhs + piece
            assert rhs is not None and (lhs - rhs).is_zero(), n


class TestSl2:
    @pytest.mark.parametrize(
        "ring,ts",
        [
            (QQ, (Fraction(1, 3), Fraction(-2, 5), Fraction(1, 7))),
            (ZZ, (2, -1, 3)),
            (GF(5), (2, 3, 4)),
        ],
    )
    def test_relations_on_basic_movies(self, ring, ts):
        P = ActionParams(ring=ring, N=3, t1=ts[0], t2=ts[1], t3=ts[2])
        for name, mov in basic_open_movies(1, 2).items():
            if name == "saddle" and ring.kind == "Z":
                with pytest.raises(TwoNotInvertible):
                    act_sl2("f", P, mov)
                continue
            rep = sl2_relations_check(P, mov)
            assert rep.ok, (name, rep.detail)

    def test_relations_over_Z_without_halves(self):
        # the spherical sl2 action never divides by two
        P = ActionParams(ring=ZZ, N=3, t1=1, t2=-2, t3=0)
        for name, mov in basic_open_movies().items():
            if name == "saddle":
                continue
            rep = sl2_relations_check(P, mov)
            assert rep.ok, (name, rep.detail)

    def test_relations_on_saddle_over_Q(self):
        P = ActionParams(ring=QQ, N=2, spherical=False, t1=Fraction(1, 3))
        rep = sl2_relations_check(P, basic_open_movies()["saddle"])
        assert rep.ok, rep.detail

    def test_e_annihilates_undecorated_basic_movies(self):
        P = rich_pack()
        for name, mov in basic_open_movies(1, 2).items():
            if name == "decorate":
                continue
            assert act_sl2("e", sl2_from_witt(P), mov).is_zero(), name

    def test_h_eigenvalue_is_minus_degree(self):
        # on a closed movie, h acts on the value by -qdegree
        P = sl2_from_witt(rich_pack(N=2))
        mov = dotted_sphere(2)
        d = degree(mov, 2)
        S = act_sl2("h", P, mov)
        assert S.value() == evaluate(mov, 2, QQ).value * (-d)


class TestDictionary:
    def test_sl2_matches_witt_on_basic_movies(self):
        Pw = rich_pack()
        Ps = sl2_from_witt(Pw)
        for ab in [(1, 1), (1, 2)]:
            for name, mov in basic_open_movies(*ab).items():
                if name == "saddle":
                    continue
                assert (act_sl2("e", Ps, mov) - act_witt(-1, Pw, mov)).is_zero(), name
                assert (
                    act_sl2("h", Ps, mov) - act_witt(0, Pw, mov).scale(2)
                ).is_zero(), name
                assert (act_sl2("f", Ps, mov) + act_witt(1, Pw, mov)).is_zero(), name

    def test_sl2_matches_witt_on_saddle(self):
        Pw = ActionParams(ring=QQ, N=3, s=Fraction(1, 4),
                          nu1=WittSequence.linear(QQ, Fraction(1, 2)),
                          nu2=WittSequence.linear(QQ, Fraction(-1, 3)),
                          spherical=False)
        Ps = sl2_from_witt(Pw)
        mov = basic_open_movies()["saddle"]
        assert (act_sl2("e", Ps, mov) - act_witt(-1, Pw, mov)).is_zero()
        assert (act_sl2("h", Ps, mov) - act_witt(0, Pw, mov).scale(2)).is_zero()
        assert (act_sl2("f", Ps, mov) + act_witt(1, Pw, mov)).is_zero()


class TestEvaluationCompat:
    def test_spherical_corpus(self):
        P = rich_pack(N=3)
        for mov in spherical_corpus(seed=41, count=6, half_moves=3):
            for n in INDICES:
                rep = verify_compat(mov, n, P)
                assert rep.ok, (n, rep.detail)

    def test_saddle_corpus_with_zero_nu3(self):
        P = saddle_pack(N=2)
        movs = [
            m
            for m in closed_corpus(seed=43, count=20)
            if any(type(x).__name__ == "Saddle" for x in m.moves)
        ]
        assert movs
        for mov in movs[:4]:
            for n in (-1, 0, 1, 2):
                rep = verify_compat(mov, n, P)
                assert rep.ok, (n, rep.detail)

    def test_per_coloring_residuals(self):
        P = rich_pack(N=3)
        for mov in spherical_corpus(seed=59, count=4):
            for n in INDICES:
                rep = colored_compat_check(mov, n, P)
                assert rep.ok, (n, rep.detail)

    def test_dotted_sphere_explicit(self):
        P = rich_pack(N=2)
        for n in (1, 2):
            assert verify_compat(dotted_sphere(1), n, P).ok

    def test_saddle_with_nonzero_nu3_raises(self):
        P = rich_pack(N=2)
        movs = [
            m
            for m in closed_corpus(seed=43, count=20)
            if any(type(x).__name__ == "Saddle" for x in m.moves)
        ]
        with pytest.raises(NonSphericalWithNu3):
            act_witt(1, P, movs[0])

    def test_half_required_over_Z(self):
        P = ActionParams(ring=ZZ, N=2)
        with pytest.raises(TwoNotInvertible):
            act_witt(1, P, dotted_sphere(1))


class TestWittOnRatios:
    def test_plain_polynomial(self):
        from foamlab.polyring import witt_act

        p = MultiPoly.var(QQ, xvars(2), "X1") ** 2
        r = witt_act_ratfun(1, RatFun(p))
        assert r == RatFun(witt_act(1, p))

    def test_quotient_rule(self):
        # L_1(1/(X1-X2)) = (X1^2 - X2^2)/(X1-X2)^2 = (X1+X2)/(X1-X2)
        one = MultiPoly.const(QQ, xvars(2), 1)
        x1 = MultiPoly.var(QQ, xvars(2), "X1")
        x2 = MultiPoly.var(QQ, xvars(2), "X2")
        r = witt_act_ratfun(1, RatFun(one, {(0, 1): 1}))
        assert r == RatFun(x1 + x2, {(0, 1): 1})

    def test_index_minus_one_on_quotient(self):
        one = MultiPoly.const(QQ, xvars(2), 1)
        r = witt_act_ratfun(-1, RatFun(one, {(0, 1): 1}))
        assert r == RatFun(MultiPoly.zero(QQ, xvars(2)), {(0, 1): 1})


class TestPdg:
    @pytest.mark.parametrize("p", [3, 5])
    def test_p_fold_iterate_vanishes(self, p):
        R = GF(p)
        P = ActionParams(ring=R, N=2, t1=2, t2=p - 1, t3=half_scalar(R),
                         spherical=False)
        for mov in closed_corpus(seed=47, count=5, half_moves=2):
            S = pdg_iterate(P, mov, p)
            assert S.is_zero() or S.value().is_zero()

    def test_requires_prime_field(self):
        P = ActionParams(ring=QQ, N=2)
        with pytest.raises(WrongRing):
            act_pdg(P, dotted_sphere(1))

    def test_char_two_spherical_only(self):
        R = GF(2)
        P = ActionParams(ring=R, N=2, t1=1, t2=1, t3=1)
        act_pdg(P, dotted_sphere(1))  # no saddle: fine
        saddled = [
            m
            for m in closed_corpus(seed=43, count=20)
            if any(type(x).__name__ == "Saddle" for x in m.moves)
        ][0]
        with pytest.raises(CharTwoNonSpherical):
            act_pdg(P, saddled)

    def test_differential_is_f(self):
        R = GF(3)
        P = ActionParams(ring=R, N=2, t1=1, t2=2, t3=2, spherical=False)
        mov = dotted_sphere(2)
        assert (act_pdg(P, mov) - act_sl2("f", P, mov)).is_zero()
