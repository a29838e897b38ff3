"""Differential forms as fiber-odd functions and their semidensity avatars.

A differential form on the base is encoded as a function of ``(x, xi)`` on a
fiber-odd chart (``xi^i`` plays the role of ``dx^i``); a multivector field is
a function of ``(x, th)`` on the conjugate chart (``th_i`` encodes a wedge
factor of the coordinate vector field along ``x^i``).  The bridge between the
two pictures is an odd Fourier transform: a Berezin integral against the
kernel ``exp(C sum_k xi^k th_k)`` on a chart carrying both odd blocks.  The
sign ``C`` and the normalisation are pinned so that on a two-dimensional base

    f            ->  f th1 th2,
    w1 dx1 + w2 dx2 ->  w1 th2 - w2 th1,
    w dx1 dx2    ->  -w,

and so that the two directions are mutually inverse and intertwine the de
Rham differential with the coefficient Laplacian ``Delta_0``.

The remaining operations ride on the bridge: divergence of multivector
fields against a base volume, the Lie derivative along a multivector, the
shift action of odd-valued one-forms, a square-root star product on forms,
and restriction of a semidensity to the Lagrangian graph of a closed
one-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .brackets import odd_poisson_bracket
from .charts import Density, Transition, lie_derivative_density, transform_density
from .errors import (
    ChartMismatch,
    InvalidTransition,
    NoExactSquareRoot,
    NonInvertibleBody,
    ParityViolation,
)
from .laplacians import VolumeForm, delta_rho
from .scalar import Scalar
from .superalgebra import Chart, OddKind, SuperFunction, bits_of

__all__ = [
    "BaseDensity",
    "darboux_partner",
    "forms_partner",
    "form_degree_component",
    "de_rham",
    "form_to_semidensity",
    "semidensity_to_form",
    "hodge",
    "DivergenceReport",
    "divergence_correspondence",
    "lie_along_multivector",
    "one_form_action",
    "star_product",
    "restrict_to_lagrangian",
]


# -- chart plumbing ---------------------------------------------------------------------


def _base_dimension_of_forms(chart: Chart) -> int:
    n = len(chart.even_coords)
    expected = tuple(f"xi{i}" for i in range(1, n + 1))
    if chart.odd_coords or chart.fiber_odds != expected:
        raise ChartMismatch(
            "expected a fiber-odd chart with generators xi1..xin and no th block"
        )
    return n


def _base_dimension_of_darboux(chart: Chart) -> int:
    n = len(chart.even_coords)
    expected = tuple(f"th{i}" for i in range(1, n + 1))
    if chart.fiber_odds or chart.odd_coords != expected:
        raise ChartMismatch(
            "expected a Darboux chart with generators th1..thn and no fiber block"
        )
    return n


def darboux_partner(forms_chart: Chart) -> Chart:
    """The Darboux chart conjugate to a fiber-odd chart (same base, th block)."""
    n = _base_dimension_of_forms(forms_chart)
    return Chart(
        name=forms_chart.name,
        even_coords=forms_chart.even_coords,
        odd_coords=tuple(f"th{i}" for i in range(1, n + 1)),
        external_odds=forms_chart.external_odds,
        params=forms_chart.params,
    )


def forms_partner(darboux_chart: Chart) -> Chart:
    """The fiber-odd chart conjugate to a Darboux chart (same base, xi block)."""
    n = _base_dimension_of_darboux(darboux_chart)
    return Chart(
        name=darboux_chart.name,
        even_coords=darboux_chart.even_coords,
        fiber_odds=tuple(f"xi{i}" for i in range(1, n + 1)),
        external_odds=darboux_chart.external_odds,
        params=darboux_chart.params,
    )


def _doubled_chart(chart: Chart, n: int) -> Chart:
    return Chart(
        name=chart.name,
        even_coords=chart.even_coords,
        odd_coords=tuple(f"th{i}" for i in range(1, n + 1)),
        fiber_odds=tuple(f"xi{i}" for i in range(1, n + 1)),
        external_odds=chart.external_odds,
        params=chart.params,
    )


def _kernel(doubled: Chart, n: int, sign: int) -> SuperFunction:
    """``exp(sign * sum_k xi^k th_k)`` as a finite product of binomials."""
    acc = SuperFunction.one(doubled)
    for k in range(1, n + 1):
        pair = SuperFunction.generator(doubled, f"xi{k}") * SuperFunction.generator(
            doubled, f"th{k}"
        )
        acc = acc * (SuperFunction.one(doubled) + pair.scale(sign))
    return acc


def form_degree_component(omega: SuperFunction, k: int) -> SuperFunction:
    """The degree-``k`` part of a form (terms with exactly ``k`` fiber factors)."""
    fiber = omega.chart.mask_of_kind(OddKind.FIBER)
    return SuperFunction(
        omega.chart,
        {m: c for m, c in omega.terms.items() if (m & fiber).bit_count() == k},
    )


# -- the differential and the bridge ------------------------------------------------------


def de_rham(omega: SuperFunction) -> SuperFunction:
    """The exterior differential ``sum_i xi^i d/dx^i`` (squares to zero)."""
    n = _base_dimension_of_forms(omega.chart)
    out = SuperFunction.zero(omega.chart)
    for i in range(n):
        xi = SuperFunction.generator(omega.chart, f"xi{i + 1}")
        out = out + xi * omega.partial_even(omega.chart.even_coords[i])
    return out


def form_to_semidensity(omega: SuperFunction) -> Density:
    """Turn a form into the semidensity with the pinned monomial images."""
    fchart = omega.chart
    n = _base_dimension_of_forms(fchart)
    doubled = _doubled_chart(fchart, n)
    c = 1 if n % 2 else -1  # (-1)^(n+1)
    prefactor = -1 if (n * (n - 1) // 2) % 2 else 1
    integrand = _kernel(doubled, n, c) * omega.retarget(doubled)
    integrated = integrand.berezin_integral(f"xi{k}" for k in range(1, n + 1))
    coefficient = integrated.scale(prefactor).retarget(darboux_partner(fchart))
    return Density.semidensity(coefficient)


def semidensity_to_form(density: Density) -> SuperFunction:
    """The inverse bridge: a semidensity's differential form."""
    if density.weight != Fraction(1, 2):
        raise ValueError("the form bridge applies to semidensities (weight 1/2)")
    dchart = density.chart
    n = _base_dimension_of_darboux(dchart)
    doubled = _doubled_chart(dchart, n)
    c = -1 if n % 2 else 1  # (-1)^n
    integrand = _kernel(doubled, n, c) * density.coefficient.retarget(doubled)
    integrated = integrand.berezin_integral(f"th{k}" for k in range(1, n + 1))
    return integrated.retarget(forms_partner(dchart))


# -- base densities and multivector divergence --------------------------------------------


@dataclass(frozen=True)
class BaseDensity:
    """A density on the base: a coefficient free of both odd coordinate blocks.

    External odd constants may appear in the coefficient; the coordinate and
    fiber generators may not.
    """

    chart: Chart
    coefficient: SuperFunction

    def __post_init__(self) -> None:
        if self.coefficient.chart != self.chart:
            raise ChartMismatch("base density coefficient must live on the stated chart")
        if self.coefficient.odd_degree(OddKind.COORDINATE) or self.coefficient.odd_degree(
            OddKind.FIBER
        ):
            raise ParityViolation(
                "a base density may not involve the odd coordinates or fibers"
            )

    @classmethod
    def constant(cls, chart: Chart, value=1) -> "BaseDensity":
        return cls(chart, SuperFunction.from_scalar(chart, value))


def hodge(f: SuperFunction, sigma: BaseDensity) -> SuperFunction:
    """The form of a multivector field against a base volume: bridge of ``f sigma``."""
    if sigma.chart != f.chart:
        raise ChartMismatch("multivector and base volume must share a chart")
    return semidensity_to_form(Density.semidensity(f * sigma.coefficient))


@dataclass(frozen=True)
class DivergenceReport:
    """Two routes to the divergence of a multivector field and their defect."""

    laplacian_route: SuperFunction
    classical_route: SuperFunction
    nilpotency_defect: SuperFunction

    @property
    def defect(self) -> SuperFunction:
        return self.laplacian_route - self.classical_route

    @property
    def matches(self) -> bool:
        return self.defect.is_zero()

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_defect.is_zero()


def classical_divergence(field: SuperFunction, sigma: BaseDensity) -> SuperFunction:
    """Componentwise divergence of a multivector field against ``sigma``.

    For ``T = sum_S T_S th_S`` (ascending index sets) the components of the
    divergence are ``(div T)_S = (1/sigma) sum_{j not in S} (-1)^{#{s in S :
    s < j}} d/dx^j (sigma T_{S + j})``.
    """
    chart = field.chart
    n = _base_dimension_of_darboux(chart)
    if sigma.chart != chart:
        raise ChartMismatch("field and base volume must share a chart")
    if sigma.coefficient.odd_degree():
        raise ParityViolation("the base volume must be a plain function of x")
    sigma_scalar = sigma.coefficient.body()
    if sigma_scalar.is_zero():
        raise NonInvertibleBody("the base volume must be invertible")
    sigma_inverse = sigma_scalar.invert()
    coordinate_mask = chart.mask_of_kind(OddKind.COORDINATE)
    terms: dict[int, Scalar] = {}
    for mask, coeff in field.terms.items():
        for bit in bits_of(mask & coordinate_mask):
            rest = mask & ~(1 << bit)
            sign = (rest & ((1 << bit) - 1)).bit_count() & 1
            value = (sigma_scalar * coeff).partial(
                chart.even_index(chart.even_coords[bit])
            ) * sigma_inverse
            if sign:
                value = -value
            acc = terms.get(rest)
            total = value if acc is None else acc + value
            if total.is_zero():
                terms.pop(rest, None)
            else:
                terms[rest] = total
    return SuperFunction(chart, terms)


def divergence_correspondence(field: SuperFunction, sigma: BaseDensity) -> DivergenceReport:
    """Compare the Laplacian of ``sigma^2`` with the classical divergence."""
    classical = classical_divergence(field, sigma)
    squared = sigma.coefficient * sigma.coefficient
    volume = VolumeForm(field.chart, squared)
    laplacian = delta_rho(volume, field)
    nilpotency = delta_rho(volume, laplacian)
    return DivergenceReport(
        laplacian_route=laplacian,
        classical_route=classical,
        nilpotency_defect=nilpotency,
    )


# -- actions on semidensities --------------------------------------------------------------


def lie_along_multivector(density: Density, f: SuperFunction) -> Density:
    """Lie derivative of a semidensity along a multivector field."""
    return lie_derivative_density(f, density)


def one_form_action(components: Sequence[SuperFunction], density: Density) -> Density:
    """The shift action ``th_i -> th_i + a_i`` of an odd-valued one-form.

    The components must be odd and free of the odd coordinates (external odd
    constants supply the values); no closedness is required — the shifts form
    an abelian supergroup acting on semidensities.
    """
    chart = density.chart
    n = _base_dimension_of_darboux(chart)
    if len(components) != n:
        raise InvalidTransition("need one shift component per odd coordinate")
    images: dict[str, SuperFunction] = {}
    for j, name in enumerate(chart.odd_coords):
        a = components[j]
        if a.chart != chart:
            raise ChartMismatch("shift components must live on the density's chart")
        if not (a.is_zero() or a.is_odd()):
            raise ParityViolation("shift components must be odd")
        for th in chart.odd_coords:
            if a.depends_on_odd(chart.odd_index(th)):
                raise InvalidTransition(
                    "shift components must not involve the odd coordinates"
                )
        images[name] = SuperFunction.generator(chart, name) + a
    return transform_density(density, Transition(chart, chart, images))


def star_product(omega: SuperFunction, other: SuperFunction) -> SuperFunction:
    """Square-root product of forms through their semidensities.

    The product of the two semidensities is split into even and odd parts;
    the root is ``sqrt(even) + (1/2) sqrt(even)^{-1} odd``, whose square
    returns the product exactly (the odd part squares to zero).  Requires the
    even part to have an invertible perfect-square body, which on forms means
    invertible top components.
    """
    if other.chart != omega.chart:
        raise ChartMismatch("star product factors must live on one chart")
    s = form_to_semidensity(omega).coefficient
    t = form_to_semidensity(other).coefficient
    product = s * t
    if product.is_zero():
        return SuperFunction.zero(omega.chart)
    if product.even_part().is_zero():
        raise NoExactSquareRoot(
            "the even part of the product vanishes while the odd part does not"
        )
    even_root = product.even_part().sqrt_even()
    odd = product.odd_part()
    if odd.is_zero():
        root = even_root
    else:
        root = even_root + (even_root.invert() * odd).scale(Fraction(1, 2))
    return semidensity_to_form(Density.semidensity(root))


def restrict_to_lagrangian(
    density: Density, alpha: Sequence[SuperFunction]
) -> BaseDensity:
    """Restrict a semidensity to the Lagrangian graph ``th_i = alpha_i(x)``.

    The one-form must be closed (checked); the result is the top-degree
    component of the form of the shifted semidensity — the density the
    semidensity induces on that Lagrangian surface.
    """
    chart = density.chart
    n = _base_dimension_of_darboux(chart)
    shift = Transition.shift_one_form(chart, chart, list(alpha))
    moved = transform_density(density, shift)
    form = semidensity_to_form(moved)
    top = form.berezin_integral(f"xi{k}" for k in range(1, n + 1))
    return BaseDensity(chart, top.retarget(chart))
