"""Coordinate transitions, Berezinians, density transport, and flows."""

from fractions import Fraction

import pytest

from oddsymplectic.brackets import odd_poisson_bracket
from oddsymplectic.charts import (
    Density,
    Transition,
    berezinian,
    bv_identity,
    canonical_delta,
    delta_q,
    exponentiate_hamiltonian,
    is_normal,
    is_symplectomorphism,
    jacobian,
    laplacian_conjugation_defect,
    lie_commutator_defect,
    lie_derivative_density,
    sqrt_berezinian,
    transform_density,
)
from oddsymplectic.errors import (
    ChartMismatch,
    InvalidTransition,
    NonTerminatingFlow,
    NotClosed,
    ParityViolation,
)
from oddsymplectic.laplacians import delta0
from oddsymplectic.superalgebra import Chart, SuperFunction


def gens(chart, *names):
    return tuple(SuperFunction.generator(chart, n) for n in names)


def one(chart):
    return SuperFunction.one(chart)


# -- basic transitions ------------------------------------------------------------


def test_identity_transition_fixes_functions():
    chart = Chart.darboux(2)
    x1, th2 = gens(chart, "x1", "th2")
    ident = Transition.identity(chart)
    f = x1 * x1 * th2 + x1
    assert ident.apply(f) == f
    assert berezinian(ident) == one(chart)


def test_scaling_images_and_berezinian():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    t = Transition.scaling(src, tgt, [2])
    (x1p,) = gens(tgt, "x1")
    (th1p,) = gens(tgt, "th1")
    assert t.images["x1"] == x1p.scale(2)
    assert t.images["th1"] == th1p.scale(Fraction(1, 2))
    assert berezinian(t) == one(tgt).scale(4)
    assert sqrt_berezinian(t) == one(tgt).scale(2)
    assert is_symplectomorphism(t)
    assert bv_identity(t).is_zero()


def test_scaling_jacobian_blocks():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    t = Transition.scaling(src, tgt, [2])
    jac = jacobian(t)
    assert jac[0][0] == one(tgt).scale(2)
    assert jac[0][1].is_zero()
    assert jac[1][0].is_zero()
    assert jac[1][1] == one(tgt).scale(Fraction(1, 2))


def test_point_transformation_square_map():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    x1p, th1p = gens(tgt, "x1", "th1")
    t = Transition.point(src, tgt, [x1p * x1p])
    # th transforms by the inverse Jacobian of the base map: th1 = th1' / (2 x1').
    assert t.images["th1"] == th1p * (x1p.scale(2)).invert()
    ber = berezinian(t)
    assert ber == (x1p * x1p).scale(4)
    assert sqrt_berezinian(t) == x1p.scale(2)
    assert is_symplectomorphism(t)
    assert bv_identity(t).is_zero()


def test_point_transformation_shear_two_dim():
    src = Chart.darboux(2)
    tgt = Chart.darboux(2, name="P")
    x1p, x2p, th1p, th2p = gens(tgt, "x1", "x2", "th1", "th2")
    t = Transition.point(src, tgt, [x1p + x2p * x2p, x2p])
    assert t.images["th1"] == th1p
    assert t.images["th2"] == th2p - x2p.scale(2) * th1p
    assert berezinian(t) == one(tgt)
    assert is_symplectomorphism(t)
    assert bv_identity(t).is_zero()


def test_point_transformation_rejects_degenerate_base_map():
    src = Chart.darboux(2)
    tgt = Chart.darboux(2, name="P")
    x1p, x2p = gens(tgt, "x1", "x2")
    with pytest.raises(InvalidTransition):
        Transition.point(src, tgt, [x1p + x2p, x1p + x2p])


def test_point_transformation_rejects_odd_dependence():
    src = Chart.darboux(2)
    tgt = Chart.darboux(2, name="P")
    x1p, x2p, th1p, th2p = gens(tgt, "x1", "x2", "th1", "th2")
    with pytest.raises(InvalidTransition):
        Transition.point(src, tgt, [x1p + th1p * th2p, x2p])


def test_composition_chain_rule_for_berezinians():
    a = Chart.darboux(1, name="A")
    b = Chart.darboux(1, name="B")
    c = Chart.darboux(1, name="C")
    x1c = SuperFunction.generator(c, "x1")
    first = Transition.scaling(a, b, [2])
    second = Transition.point(b, c, [x1c * x1c])
    chained = first.compose(second)
    assert chained.images["x1"] == (x1c * x1c).scale(2)
    lhs = berezinian(chained)
    rhs = second.apply(berezinian(first)) * berezinian(second)
    assert lhs == rhs
    assert is_symplectomorphism(chained)
    assert bv_identity(chained).is_zero()


def test_compose_requires_matching_intermediate_chart():
    a = Chart.darboux(1, name="A")
    b = Chart.darboux(1, name="B")
    c = Chart.darboux(2, name="C")
    x1c = SuperFunction.generator(c, "x1")
    first = Transition.scaling(a, b, [2])
    with pytest.raises(ChartMismatch):
        first.compose(Transition.point(c, c, [x1c, SuperFunction.generator(c, "x2")]))


# -- validation -------------------------------------------------------------------


def test_transition_rejects_wrong_parity_image():
    chart = Chart.darboux(1)
    (x1,) = gens(chart, "x1")
    with pytest.raises(ParityViolation):
        Transition(chart, chart, {"th1": x1})


def test_transition_rejects_unknown_image_names():
    chart = Chart.darboux(1)
    (x1,) = gens(chart, "x1")
    with pytest.raises(InvalidTransition):
        Transition(chart, chart, {"y9": x1})


def test_transition_requires_images_for_renamed_targets():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="Q", even_prefix="y", odd_prefix="et")
    with pytest.raises(InvalidTransition):
        Transition(src, tgt, {})


def test_berezinian_rejects_degenerate_odd_block():
    chart = Chart.darboux(2)
    th1, th2 = gens(chart, "th1", "th2")
    t = Transition(chart, chart, {"th1": th1 + th2, "th2": th1 + th2})
    with pytest.raises(InvalidTransition):
        berezinian(t)


def test_berezinian_with_rational_coefficients():
    chart = Chart.darboux(1)
    x1, th1 = gens(chart, "x1", "th1")
    t = Transition(chart, chart, {"th1": x1 * th1})
    assert berezinian(t) == x1.invert()
    assert not is_symplectomorphism(t)


# -- one-form shifts --------------------------------------------------------------


def test_shift_by_closed_one_form_is_canonical():
    chart = Chart.darboux(2).with_externals("nu")
    x1, x2, th1, th2, nu = gens(chart, "x1", "x2", "th1", "th2", "nu")
    t = Transition.shift_one_form(chart, chart, [nu * x2, nu * x1])
    assert t.images["th1"] == th1 + nu * x2
    assert berezinian(t) == one(chart)
    assert is_symplectomorphism(t)
    assert bv_identity(t).is_zero()


def test_shift_by_non_closed_one_form_is_rejected():
    chart = Chart.darboux(2).with_externals("nu")
    x2, nu = gens(chart, "x2", "nu")
    zero = SuperFunction.zero(chart)
    with pytest.raises(NotClosed):
        Transition.shift_one_form(chart, chart, [nu * x2, zero])


def test_non_closed_shift_built_by_hand_breaks_the_bracket():
    chart = Chart.darboux(2).with_externals("nu")
    x2, th1, nu = gens(chart, "x2", "th1", "nu")
    t = Transition(chart, chart, {"th1": th1 + nu * x2})
    assert not is_symplectomorphism(t)


def test_shift_components_must_be_odd_and_coordinate_free():
    chart = Chart.darboux(1).with_externals("nu")
    x1, th1, nu = gens(chart, "x1", "th1", "nu")
    with pytest.raises(ParityViolation):
        Transition.shift_one_form(chart, chart, [x1])
    with pytest.raises(InvalidTransition):
        Transition.shift_one_form(chart, chart, [nu * th1 * th1 + th1])


# -- the coordinate Laplacian under transitions ------------------------------------


def test_laplacian_conjugation_on_square_map():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    x1, th1 = gens(src, "x1", "th1")
    x1p, th1p = gens(tgt, "x1", "th1")
    t = Transition.point(src, tgt, [x1p * x1p])
    f = x1 * th1
    # Both routes give 1: the pulled-back Laplacian and the corrected one.
    g = t.apply(f)
    assert g == x1p * th1p.scale(Fraction(1, 2))
    assert t.apply(delta0(f)) == one(tgt)
    assert laplacian_conjugation_defect(t, f).is_zero()


def test_laplacian_conjugation_on_various_transitions():
    src = Chart.darboux(2)
    tgt = Chart.darboux(2, name="P")
    x1, x2, th1, th2 = gens(src, "x1", "x2", "th1", "th2")
    x1p, x2p = gens(tgt, "x1", "x2")
    samples = [
        x1 * th1,
        x1 * x2 * th1 * th2,
        th1 * th2 + x2 * x2,
        x1 * x1 * th2 + th1,
    ]
    transitions = [
        Transition.scaling(src, tgt, [3, Fraction(1, 2)]),
        Transition.point(src, tgt, [x1p + x2p * x2p, x2p]),
        Transition.point(src, tgt, [x1p + x1p * x2p, x2p + x1p * x1p]),
    ]
    for t in transitions:
        for f in samples:
            assert laplacian_conjugation_defect(t, f).is_zero()


# -- densities ---------------------------------------------------------------------


def test_density_transport_integer_weights():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    t = Transition.scaling(src, tgt, [2])
    for weight, value in [(0, 1), (1, 4), (2, 16), (-1, Fraction(1, 4))]:
        rho = Density(src, one(src), Fraction(weight))
        moved = transform_density(rho, t)
        assert moved.coefficient == one(tgt).scale(value)
        assert moved.weight == weight


def test_density_transport_half_integer_weights():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    t = Transition.scaling(src, tgt, [2])
    s = Density.semidensity(one(src))
    assert transform_density(s, t).coefficient == one(tgt).scale(2)
    covector = Density(src, one(src), Fraction(-1, 2))
    assert transform_density(covector, t).coefficient == one(tgt).scale(Fraction(1, 2))


def test_density_transport_rejects_third_weights():
    src = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    t = Transition.scaling(src, tgt, [2])
    with pytest.raises(ValueError):
        transform_density(Density(src, one(src), Fraction(1, 3)), t)


def test_density_algebra_and_guards():
    chart = Chart.darboux(1)
    other = Chart.darboux(2)
    x1, th1 = gens(chart, "x1", "th1")
    s = Density.semidensity(x1)
    assert (s + Density.semidensity(th1)).coefficient == x1 + th1
    assert (s - s).coefficient.is_zero()
    with pytest.raises(ChartMismatch):
        s + Density.volume(x1)
    with pytest.raises(ChartMismatch):
        Density(other, x1, Fraction(1, 2))
    with pytest.raises(ChartMismatch):
        transform_density(
            Density.semidensity(SuperFunction.one(other)),
            Transition.identity(chart),
        )


def test_canonical_delta_acts_on_semidensities_only():
    chart = Chart.darboux(1)
    x1, th1 = gens(chart, "x1", "th1")
    s = Density.semidensity(x1 * th1)
    assert canonical_delta(s).coefficient == one(chart)
    assert canonical_delta(canonical_delta(s)).coefficient.is_zero()
    with pytest.raises(ValueError):
        canonical_delta(Density.volume(x1))


# -- flows -------------------------------------------------------------------------


def test_flow_of_odd_coordinate_translates_its_partner():
    chart = Chart.darboux(1)
    x1, th1 = gens(chart, "x1", "th1")
    t = exponentiate_hamiltonian(th1, 1)
    assert t.images["x1"] == x1 - one(chart)
    assert t.images["th1"] == th1
    assert is_symplectomorphism(t)
    assert berezinian(t) == one(chart)


def test_flow_group_law_and_invariance():
    chart = Chart.darboux(2)
    x1, th2 = gens(chart, "x1", "th2")
    q = x1 * x1 * th2
    once = exponentiate_hamiltonian(q, 1)
    twice = exponentiate_hamiltonian(q, 2)
    assert once.compose(once) == twice
    assert is_symplectomorphism(once)
    assert berezinian(once) == one(chart)
    assert bv_identity(once).is_zero()


def test_flow_with_odd_time_of_even_hamiltonian():
    chart = Chart.darboux(1).with_externals("nu")
    x1, th1, nu = gens(chart, "x1", "th1", "nu")
    t = exponentiate_hamiltonian(x1, nu)
    assert t.images["th1"] == th1 + nu
    assert t.images["x1"] == x1
    assert is_symplectomorphism(t)


def test_flow_parity_and_constancy_guards():
    chart = Chart.darboux(1).with_externals("nu")
    x1, th1, nu = gens(chart, "x1", "th1", "nu")
    with pytest.raises(ParityViolation):
        exponentiate_hamiltonian(th1, nu)
    with pytest.raises(ParityViolation):
        exponentiate_hamiltonian(x1, 1)
    with pytest.raises(ParityViolation):
        exponentiate_hamiltonian(th1, x1)
    with pytest.raises(ParityViolation):
        exponentiate_hamiltonian(x1 + th1, 1)


def test_flow_that_never_terminates_is_reported():
    chart = Chart.darboux(1)
    x1, th1 = gens(chart, "x1", "th1")
    with pytest.raises(NonTerminatingFlow):
        exponentiate_hamiltonian(x1 * th1, 1)


# -- Lie derivatives and first-order operators on semidensities ---------------------


def test_lie_derivative_direction_pins():
    chart = Chart.darboux(2)
    x1, x2, th1, th2 = gens(chart, "x1", "x2", "th1", "th2")
    s = x1 * x1 * x1 + x1 * x2 * th1 + th1 * th2
    dens = Density.semidensity(s)
    along_th1 = lie_derivative_density(th1, dens)
    assert along_th1.coefficient == s.partial_even("x1")
    along_x1 = lie_derivative_density(x1, dens)
    assert along_x1.coefficient == s.partial_odd("th1")


def test_lie_derivative_matches_flow_expansion_odd_generator():
    chart = Chart.darboux(2).with_params("t")
    x1, x2, th1, th2 = gens(chart, "x1", "x2", "th1", "th2")
    tpar = SuperFunction.generator(chart, "t")
    f = x1 * x1 * th2 + th1
    s = x1 * x2 + x2 * th1 * th2 + th2
    flow = exponentiate_hamiltonian(f, -tpar)
    moved = transform_density(Density.semidensity(s), flow)
    split = moved.coefficient.coefficients_in_param("t")
    assert split.get(0) == s
    assert split.get(1) == lie_derivative_density(f, Density.semidensity(s)).coefficient


def test_lie_derivative_matches_flow_expansion_even_generator():
    chart = Chart.darboux(2).with_externals("nu")
    x1, x2, th1, th2, nu = gens(chart, "x1", "x2", "th1", "th2", "nu")
    f = x1 * th1 * th2
    s = x2 + th1 + x1 * th2
    flow = exponentiate_hamiltonian(f, nu)
    moved = transform_density(Density.semidensity(s), flow)
    lie = lie_derivative_density(f, Density.semidensity(s)).coefficient
    assert moved.coefficient == s + nu * lie


def test_lie_derivative_is_the_commutator_with_the_laplacian():
    chart = Chart.darboux(2)
    x1, x2, th1, th2 = gens(chart, "x1", "x2", "th1", "th2")
    dens = Density.semidensity(x1 * x2 + x1 * th1 * th2 + th2)
    for f in [x1 * x2, th1 * th2 + x2, x1 * x1 * th2 + th1, th1]:
        assert lie_commutator_defect(f, dens).coefficient.is_zero()


def test_delta_q_values_and_commutation():
    chart = Chart.darboux(2)
    x1, x2, th1, th2 = gens(chart, "x1", "x2", "th1", "th2")
    s = Density.semidensity(x1 * x1)
    assert delta_q(th1, s).coefficient == x1.scale(2)
    q = x1 * x2 * th2 + th1
    rich = Density.semidensity(x1 * x2 + x2 * th1 * th2 + th2 + x1 * th1)
    lhs = canonical_delta(delta_q(q, rich))
    rhs = delta_q(q, canonical_delta(rich))
    assert (lhs - rhs).coefficient.is_zero()
    with pytest.raises(ValueError):
        delta_q(q, Density.volume(x1))


# -- normality ----------------------------------------------------------------------


def test_is_normal_finds_the_rescaling_witness():
    chart = Chart.darboux(1)
    tgt = Chart.darboux(1, name="P")
    rho = Density.volume(one(chart).scale(4))
    good = Transition.scaling(chart, tgt, [Fraction(1, 2)])
    bad = Transition.scaling(chart, tgt, [2])
    report = is_normal(rho, [bad, good])
    assert report.normalising == (1,)
    assert report.found
    assert report.root_is_closed
    assert transform_density(rho, good).coefficient == one(tgt)


def test_is_normal_necessary_condition_fails_for_obstructed_volume():
    chart = Chart.darboux(2)
    x1, x2, th1, th2 = gens(chart, "x1", "x2", "th1", "th2")
    g = one(chart) + x1 * x2 * th1 * th2
    rho = Density.volume(g * g)
    report = is_normal(rho, [])
    assert not report.found
    assert not report.root_is_closed
    assert report.delta_on_root == x2 * th2 - x1 * th1


def test_is_normal_requires_weight_one():
    chart = Chart.darboux(1)
    with pytest.raises(ValueError):
        is_normal(Density.semidensity(one(chart)), [])
