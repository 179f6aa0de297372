from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import basis
from supchev.exact import identity, inverse, matmul
from supchev.lattice import (
    WeightedModule,
    adjoint_module,
    admissible_check,
    cartan_binomial_matrix,
    defining_module,
    divided_powers,
    element_stabilizes,
    generate_lattice,
    kostant_generators,
    missing_coroots,
    nilpotency_degree,
    stabilizer_cartan,
    standard_lattice,
    weight_components_in_lattice,
)
from supchev.scalarring import SQRT2

MATRIX_FAMILIES = ["sl(2|1)", "sl(3|2)", "osp(1|2)", "osp(3|2)", "osp(2|2)", "osp(2|4)", "P(2)"]
ALL_FAMILIES = MATRIX_FAMILIES + ["D(2,1;1)", "D(2,1;2)", "D(2,1;-2)"]


def modules(fam):
    cb = basis(fam)
    out = [adjoint_module(cb)]
    if fam in MATRIX_FAMILIES:
        out.append(defining_module(cb))
    return out


def test_divided_powers_of_a_nilpotent():
    x = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert nilpotency_degree(x) == 3
    assert divided_powers(x) == [x, [[0, 0, Fraction(1, 2)], [0, 0, 0], [0, 0, 0]]]


def test_nilpotency_rejects_invertible():
    with pytest.raises(ValueError):
        nilpotency_degree([[1, 0], [0, 1]])


def test_cartan_binomial_on_a_diagonal():
    h = [[3, 0], [0, -1]]
    assert cartan_binomial_matrix(h, 2) == [[3, 0], [0, 1]]
    assert cartan_binomial_matrix(h, 0) == identity(2)


def test_standard_sl21_defining_lattice_is_admissible():
    mod = defining_module(basis("sl(2|1)"))
    assert admissible_check(mod, identity(3)) == (True, None)


def test_osp12_adjoint_lattice_is_admissible():
    mod = adjoint_module(basis("osp(1|2)"))
    assert admissible_check(mod, standard_lattice(mod))[0]


def test_half_scaled_vector_fails_with_witness():
    mod = defining_module(basis("sl(2|1)"))
    lat = identity(3)
    lat[0][0] = Fraction(1, 2)
    ok, witness = admissible_check(mod, lat)
    assert not ok
    assert witness.generator == "X(a1)^(1)" and witness.column == 0
    assert witness.image == (0, Fraction(1, 2), 0)


def test_singular_lattice_rejected():
    mod = defining_module(basis("sl(2|1)"))
    with pytest.raises(ValueError):
        admissible_check(mod, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])


def test_type_b_defining_lattice_uses_sqrt2():
    mod = defining_module(basis("osp(3|2)"))
    lat = standard_lattice(mod)
    assert SQRT2 in [x for row in lat for x in row]
    assert admissible_check(mod, lat)[0]
    assert not admissible_check(mod, identity(mod.dim))[0]


@pytest.mark.parametrize("fam", ALL_FAMILIES)
def test_standard_lattices_admissible_and_graded(fam):
    for mod in modules(fam):
        lat = standard_lattice(mod)
        assert admissible_check(mod, lat)[0]
        assert weight_components_in_lattice(mod, lat)


@pytest.mark.parametrize("fam", ALL_FAMILIES)
def test_generator_checks_agree_with_whole_element_route(fam):
    for mod in modules(fam):
        lat = standard_lattice(mod)
        assert all(element_stabilizes(mod, lat, g.matrix) for g in kostant_generators(mod))


def test_no_defining_module_for_exceptional_family():
    with pytest.raises(ValueError):
        defining_module(basis("D(2,1;2)"))


# ---------------------------------------------------------------------------
# lattice generation
# ---------------------------------------------------------------------------


def test_orbit_of_highest_vector_is_standard_lattice():
    mod = defining_module(basis("sl(2|1)"))
    assert generate_lattice(mod, [[1, 0, 0]]) == identity(3)


def test_orbit_of_scaled_vector():
    mod = defining_module(basis("sl(2|1)"))
    assert generate_lattice(mod, [[2, 0, 0]]) == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]


def test_generation_rejects_irrational_vectors():
    mod = defining_module(basis("sl(2|1)"))
    with pytest.raises(ValueError):
        generate_lattice(mod, [[SQRT2, 0, 0]])


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any))
def test_generated_lattices_are_admissible(vec):
    mod = defining_module(basis("sl(2|1)"))
    lat = generate_lattice(mod, [vec])
    assert admissible_check(mod, lat)[0]
    assert weight_components_in_lattice(mod, lat)
    coords = [sum(Fraction(r[c]) * v for c, v in enumerate(vec)) for r in inverse(lat)]
    assert all(x.denominator == 1 for x in coords)


@given(st.integers(1, 5), st.sampled_from(MATRIX_FAMILIES))
def test_integer_multiples_stay_admissible(k, fam):
    mod = defining_module(basis(fam))
    lat = [[k * x for x in row] for row in standard_lattice(mod)]
    assert admissible_check(mod, lat)[0]


# ---------------------------------------------------------------------------
# Cartan stabilizer
# ---------------------------------------------------------------------------


def test_sl21_defining_stabilizer_is_hz():
    st_ = stabilizer_cartan(defining_module(basis("sl(2|1)")))
    assert st_.index_over_hz() == 1
    assert st_.contains([1, 0]) and not st_.contains([Fraction(1, 2), 0])


def test_osp22_adjoint_stabilizer_has_index_two():
    st_ = stabilizer_cartan(adjoint_module(basis("osp(2|2)")))
    assert st_.index_over_hz() == 2
    assert st_.contains([Fraction(1, 2), 0])


def test_zero_weight_set_gives_everything():
    cb = basis("sl(2|1)")
    trivial = WeightedModule(cb, "trivial", {k: [[0]] for k in cb.keys}, ((0, 0),), (0,))
    st_ = stabilizer_cartan(trivial)
    assert st_.full and st_.index_over_hz() is None
    assert st_.contains([Fraction(1, 3), 7])


def test_empty_module_rejected():
    cb = basis("sl(2|1)")
    with pytest.raises(ValueError):
        stabilizer_cartan(WeightedModule(cb, "empty", {}, (), ()))


@pytest.mark.parametrize("fam", ALL_FAMILIES)
def test_stabilizer_contains_all_coroots(fam):
    for mod in modules(fam):
        assert missing_coroots(mod) == []


@pytest.mark.parametrize("fam", ["sl(2|1)", "osp(1|2)", "osp(2|2)", "P(2)"])
def test_stabilizer_shape_on_standard_lattice(fam):
    # root vectors stabilize, their halves do not, and the Cartan part matches the dual of the weights
    for mod in modules(fam):
        lat = standard_lattice(mod)
        cb = mod.cb
        for r in cb.rd.roots:
            x = mod.action[r]
            assert element_stabilizes(mod, lat, x)
            assert not element_stabilizes(mod, lat, [[Fraction(v) / 2 if isinstance(v, int) else v / 2 for v in row] for row in x])
        st_ = stabilizer_cartan(mod)
        for vec in st_.basis:
            h = _cartan_matrix(mod, vec)
            assert element_stabilizes(mod, lat, h)
            assert not element_stabilizes(mod, lat, _cartan_matrix(mod, [v / 2 for v in vec]))


def _cartan_matrix(mod, coeffs):
    out = [[0] * mod.dim for _ in range(mod.dim)]
    for i, c in enumerate(coeffs, 1):
        h = mod.action[("H", i)]
        out = [[o + c * x for o, x in zip(ro, rh)] for ro, rh in zip(out, h)]
    return out


def test_conjugation_by_lattice_is_exact():
    mod = defining_module(basis("osp(1|2)"))
    lat = standard_lattice(mod)
    assert matmul(inverse(lat), lat) == identity(mod.dim)
