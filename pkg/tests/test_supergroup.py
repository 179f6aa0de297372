import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import basis
from supchev.scalarring import gr_inv
from supchev.supergroup import (
    EvenRoot,
    FactorizationStats,
    GrassmannRing,
    GroupWord,
    NotFactorizable,
    OddRootFree,
    OddRootSquare,
    RMatrix,
    Torus,
    WordSyntaxError,
    commutator,
    extract_odd_coordinates,
    factorize,
    format_group_word,
    gen_to_matrix,
    group_commutator,
    group_module,
    has_square,
    inverse_word,
    odd_even_commutator_word,
    lie_functor,
    matrix_inverse,
    matrix_to_json,
    normal_form_matrix,
    normal_form_to_json,
    odd_generator,
    one_parameter_law,
    parse_group_word,
    random_word,
    semidirect_check,
    string_signs,
    torus_for_root,
    word_to_matrix,
)

FAMILIES = ["sl(2|1)", "sl(3|2)", "osp(1|2)", "osp(3|2)", "osp(2|2)", "osp(1|4)", "P(2)", "D(2,1;2)"]
SQUARE_FAMILIES = ["osp(1|2)", "osp(3|2)", "osp(1|4)", "osp(5|2)"]


def gm_for(fam, **kw):
    return group_module(basis(fam), **kw)


def root(fam, label):
    return basis(fam).rd.root_by_label(label)


# ---------------------------------------------------------------------------
# rings and generators
# ---------------------------------------------------------------------------


def test_grassmann_generators_anticommute():
    ring = GrassmannRing(4)
    a, b = ring.gen(1), ring.gen(2)
    assert a * b == -(b * a)
    assert (a * a).is_zero()
    assert ring.parse("1 + t1t2") * ring.parse("1 - t1t2") == ring.one()


def test_truncated_ring_kills_high_degree():
    ring = GrassmannRing(3, max_degree=1)
    assert (ring.gen(1) * ring.gen(2)).is_zero()


def test_even_root_is_elementary_matrix():
    gm = gm_for("sl(2|1)")
    t = gm.ring.gen(1) * gm.ring.gen(2) + gm.ring.scalar(3)
    m = gen_to_matrix(EvenRoot(root("sl(2|1)", "a2"), t), gm)
    assert m == gm.one() + RMatrix(3, {(0, 1): t})


def test_torus_with_unit_parameter_is_identity():
    gm = gm_for("sl(2|1)")
    assert gen_to_matrix(Torus((1, 0), gm.ring.one()), gm).is_identity()


def test_torus_acts_by_weights():
    gm = gm_for("sl(2|1)")
    t = gm.ring.scalar(2)
    m = gen_to_matrix(Torus((1, 0), t), gm)
    assert [m.get(v, v) for v in range(3)] == [gm.ring.scalar(2), gm.ring.scalar(gr_inv(t).body), gm.ring.one()]


@pytest.mark.parametrize(
    "gen",
    [
        lambda r, ring: EvenRoot(r("g1"), ring.one()),
        lambda r, ring: EvenRoot(r("a1"), ring.gen(1)),
        lambda r, ring: OddRootFree(r("g1"), ring.one()),
        lambda r, ring: Torus((1, 0), ring.gen(1) * ring.gen(2)),
    ],
)
def test_generator_validation(gen):
    gm = gm_for("sl(2|1)")
    with pytest.raises(ValueError):
        gen_to_matrix(gen(lambda x: root("sl(2|1)", x), gm.ring), gm)


def test_odd_generator_type_follows_root():
    cb = basis("osp(1|2)")
    ring = GrassmannRing(2)
    assert isinstance(odd_generator(cb, root("osp(1|2)", "g1"), ring.gen(1)), OddRootSquare)
    cb2 = basis("sl(2|1)")
    assert isinstance(odd_generator(cb2, root("sl(2|1)", "g1"), ring.gen(1)), OddRootFree)
    with pytest.raises(ValueError):
        odd_generator(cb2, root("sl(2|1)", "g1"), ring.gen(1), ring.one())


def test_empty_word_is_identity():
    gm = gm_for("sl(2|1)")
    assert word_to_matrix(GroupWord(gm.ring), gm).is_identity()


def test_odd_free_product_adds_parameters():
    gm = gm_for("sl(2|1)")
    th, eta = gm.ring.gen(1), gm.ring.gen(2)
    g = root("sl(2|1)", "g4")
    w = GroupWord(gm.ring, (OddRootFree(g, th), OddRootFree(g, eta)))
    assert word_to_matrix(w, gm) == gm.one() + gm.lift(gm.odd_operator(g), th + eta)


@pytest.mark.parametrize("fam", FAMILIES)
def test_word_times_inverse_is_identity(fam):
    gm = gm_for(fam)
    rng = random.Random(7)
    for _ in range(5):
        w = random_word(gm, rng, 6)
        assert word_to_matrix(w * inverse_word(w), gm).is_identity()
        m = word_to_matrix(w, gm)
        assert (m * matrix_inverse(m, gm)).is_identity()


@given(st.integers(0, 10**6))
def test_exp_additivity(seed):
    gm = gm_for("osp(3|2)")
    rng = random.Random(seed)
    a = rng.choice(gm.cb.rd.even_roots)
    t, s = gm.ring.random_even(rng), gm.ring.random_even(rng)
    lhs = gen_to_matrix(EvenRoot(a, t), gm) * gen_to_matrix(EvenRoot(a, s), gm)
    assert lhs == gen_to_matrix(EvenRoot(a, t + s), gm)


@pytest.mark.parametrize("fam", SQUARE_FAMILIES)
def test_odd_square_group_law(fam):
    gm = gm_for(fam)
    rng = random.Random(3)
    roots = [g for g in gm.cb.rd.odd_roots if has_square(gm.cb, g)]
    assert roots
    for g in roots:
        for _ in range(3):
            t1, t2 = (gm.ring.random_even(rng, body=False) for _ in range(2))
            th1, th2 = gm.ring.random_odd(rng), gm.ring.random_odd(rng)
            assert one_parameter_law(gm, g, t1, th1, t2, th2)


def test_no_double_roots_outside_orthosymplectic_b():
    cb = basis("sl(3|2)")
    assert not any(has_square(cb, g) for g in cb.rd.odd_roots)


# ---------------------------------------------------------------------------
# commutators
# ---------------------------------------------------------------------------


def test_opposite_odd_commutator_is_torus():
    gm = gm_for("sl(2|1)")
    th, eta = gm.ring.gen(1), gm.ring.gen(2)
    g = root("sl(2|1)", "g4")
    res = commutator(OddRootFree(g, th), OddRootFree(gm.cb.rd.neg(g), eta), gm)
    assert res.ok and res.kind == "odd-odd"
    (gen,) = res.predicted.gens
    assert gen == torus_for_root(gm.cb, g, gm.ring.one() - th * eta)


def test_commutator_without_sum_root_is_trivial():
    gm = gm_for("sl(2|1)")
    th, eta = gm.ring.gen(1), gm.ring.gen(2)
    res = commutator(OddRootFree(root("sl(2|1)", "g4"), th), OddRootFree(root("sl(2|1)", "g3"), eta), gm)
    assert res.ok and len(res.predicted) == 0 and res.direct_matrix.is_identity()


def test_torus_conjugation_rescales_parameter():
    gm = gm_for("sl(2|1)")
    a = root("sl(2|1)", "a2")
    t = gm.ring.scalar(3)
    res = commutator(Torus((1, 0), t), EvenRoot(a, gm.ring.gen(1) * gm.ring.gen(2)), gm)
    assert res.ok
    assert res.predicted.gens[0].t == gm.ring.scalar(9) * gm.ring.gen(1) * gm.ring.gen(2)


def test_string_signs_shape():
    cb = basis("osp(3|2)")
    for g in cb.rd.odd_roots:
        for a in cb.rd.even_roots:
            signs = string_signs(cb, a, g)
            assert all(s in (1, -1) for s in signs)


@pytest.mark.parametrize("fam", FAMILIES)
def test_closed_form_commutators_match_direct(fam):
    gm = gm_for(fam)
    cb, rd = gm.cb, gm.cb.rd
    rng = random.Random(11)
    for g in rd.odd_roots:
        theta = gm.ring.random_odd(rng)
        x = odd_generator(cb, g, theta)
        for a in rd.even_roots:
            assert commutator(x, EvenRoot(a, gm.ring.random_even(rng)), gm).ok
        for d in rd.odd_roots:
            assert commutator(x, odd_generator(cb, d, gm.ring.random_odd(rng)), gm).ok
        for i in range(rd.rank):
            h = tuple(int(k == i) for k in range(rd.rank))
            assert commutator(Torus(h, gm.ring.random_even(rng, unit=True)), x, gm).ok


def test_odd_even_commutator_word_is_product_over_string():
    cb = basis("sl(2|1)")
    ring = GrassmannRing(4)
    w = odd_even_commutator_word(cb, root("sl(2|1)", "g4"), root("sl(2|1)", "a1"), ring.scalar(2), ring.gen(1))
    assert all(isinstance(g, OddRootFree) for g in w)
    assert len(w) == 1


def test_group_commutator_of_commuting_elements():
    gm = gm_for("sl(2|1)")
    a = gen_to_matrix(Torus((1, 0), gm.ring.scalar(2)), gm)
    b = gen_to_matrix(Torus((0, 1), gm.ring.scalar(5)), gm)
    assert group_commutator(a, b, gm).is_identity()


# ---------------------------------------------------------------------------
# factorization and coordinate extraction
# ---------------------------------------------------------------------------


def test_single_even_generator_factorization():
    gm = gm_for("sl(2|1)")
    w = GroupWord(gm.ring, (EvenRoot(root("sl(2|1)", "a1"), gm.ring.scalar(4)),))
    nf = factorize(w, gm)
    assert nf.g0 == word_to_matrix(w, gm)
    assert all(v.is_zero() for v in nf.coordinates())


def test_opposite_pair_factorization():
    gm = gm_for("sl(2|1)")
    th, eta = gm.ring.gen(1), gm.ring.gen(2)
    g = root("sl(2|1)", "g4")
    ng = gm.cb.rd.neg(g)
    w = GroupWord(gm.ring, (OddRootFree(g, th), OddRootFree(ng, eta)))
    nf = factorize(w, gm)
    assert nf.theta_minus[ng] == eta and nf.theta_plus[g] == th
    assert all(v.is_zero() for r, v in {**nf.theta_minus, **nf.theta_plus}.items() if r not in (g, ng))
    u = gm.ring.one() - th * eta
    assert nf.g0 == RMatrix(3, {(0, 0): u, (1, 1): gm.ring.one(), (2, 2): u})
    assert normal_form_matrix(nf, gm) == word_to_matrix(w, gm)


@pytest.mark.parametrize("fam", FAMILIES)
def test_factorization_round_trip(fam):
    gm = gm_for(fam)
    rng = random.Random(fam)
    stats = FactorizationStats()
    for _ in range(6):
        w = random_word(gm, rng, rng.randint(0, 8))
        nf = factorize(w, gm, stats)
        m = word_to_matrix(w, gm)
        assert normal_form_matrix(nf, gm) == m
        assert extract_odd_coordinates(m, gm).coordinates() == nf.coordinates()
        # re-associated word: a normal form followed by its own rewriting
        again = factorize(GroupWord(gm.ring, tuple(nf.g0_word.gens) + tuple(nf.odd_word(gm.cb))), gm)
        assert again.coordinates() == nf.coordinates()


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_factorization_property(seed):
    gm = gm_for("osp(1|2)")
    rng = random.Random(seed)
    w = random_word(gm, rng, rng.randint(0, 8))
    nf = factorize(w, gm)
    assert normal_form_matrix(nf, gm) == word_to_matrix(w, gm)
    assert extract_odd_coordinates(word_to_matrix(w, gm), gm).coordinates() == nf.coordinates()


def test_extraction_of_even_element_gives_zero_coordinates():
    gm = gm_for("sl(2|1)")
    w = GroupWord(gm.ring, (EvenRoot(root("sl(2|1)", "a1"), gm.ring.scalar(2)), Torus((1, 1), gm.ring.scalar(3))))
    nf = extract_odd_coordinates(word_to_matrix(w, gm), gm)
    assert all(v.is_zero() for v in nf.coordinates())


def test_extraction_rejects_non_group_matrix():
    gm = gm_for("sl(2|1)")
    # odd block entry with an even coefficient
    bad = gm.one() + RMatrix(3, {(0, 2): gm.ring.one()})
    with pytest.raises(NotFactorizable):
        extract_odd_coordinates(bad, gm)


# ---------------------------------------------------------------------------
# degenerate rings and the Lie functor
# ---------------------------------------------------------------------------


def test_single_generator_ring_odd_elements_commute():
    gm = gm_for("sl(2|1)", n_gens=1)
    th = gm.ring.gen(1)
    x = gen_to_matrix(OddRootFree(root("sl(2|1)", "g4"), th), gm)
    y = gen_to_matrix(OddRootFree(root("sl(2|1)", "g1"), th), gm)
    assert x * y == y * x


@pytest.mark.parametrize("fam", ["sl(2|1)", "osp(1|2)", "osp(3|2)", "P(2)"])
def test_semidirect_degeneration(fam):
    gm = gm_for(fam, n_gens=2, max_degree=1)
    rep = semidirect_check(gm, random.Random(1), samples=10)
    assert rep.ok, rep.failures


def test_semidirect_needs_truncated_ring():
    with pytest.raises(ValueError):
        semidirect_check(gm_for("sl(2|1)"), random.Random(0))


@pytest.mark.parametrize("fam", ["sl(2|1)", "osp(1|2)", "osp(3|2)", "P(2)", "D(2,1;2)"])
def test_lie_functor(fam):
    rep = lie_functor(basis(fam), "adjoint" if fam.startswith("D") else "defining")
    assert rep.ok, rep.failures[:3]
    assert rep.checks > 0


# ---------------------------------------------------------------------------
# word text format
# ---------------------------------------------------------------------------


def test_parse_word():
    cb = basis("osp(1|2)")
    ring = GrassmannRing(4)
    text = "# comment\nx even:a1 t=2\nx odd:g1 theta=t1 t=t2t3\nh H=1 t=3\n"
    w = parse_group_word(text, cb, ring)
    assert [type(g) for g in w.gens] == [EvenRoot, OddRootSquare, Torus]
    assert parse_group_word(format_group_word(w, cb), cb, ring) == w


@pytest.mark.parametrize(
    "text",
    ["y even:a1 t=1", "x even:g1 t=1", "x odd:a1 theta=t1", "x even:a1", "h H=1,0 t=2", "x even:a1 t=1 q=2", "x a1 t=1"],
)
def test_parse_word_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_group_word(text, basis("osp(1|2)"), GrassmannRing(4))


def test_json_shapes():
    gm = gm_for("sl(2|1)")
    w = GroupWord(gm.ring, (OddRootFree(root("sl(2|1)", "g4"), gm.ring.gen(1)),))
    nf = factorize(w, gm)
    js = normal_form_to_json(nf, gm.cb)
    assert js["theta_plus"]["g4"] == "1*t1"
    assert matrix_to_json(gm.one()) == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
