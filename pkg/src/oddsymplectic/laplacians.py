"""Odd Laplacians on functions relative to a volume element.

With respect to a volume coefficient ``rho`` (an even, invertible-body
function on a Darboux chart), the operator on functions is

    Delta_rho f = Delta_0 f + (1/2) {log rho, f},
    Delta_0 f   = sum_i d^2 f / dx^i dth_i,

where ``{log rho, .}`` is expanded through exact logarithmic derivatives
``invert(rho) * d(rho)``.  The same operator arises as
``(1/2) (-1)^{p(f)} div_rho D_f`` for the canonical odd bracket; the
divergence form is implemented independently (for brackets of either
parity), which gives a nontrivial cross-check and, for even brackets, the
first-order modular vector field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .brackets import PoissonStructure, odd_poisson_bracket
from .errors import ChartMismatch, NonInvertibleBody, ParityViolation
from .superalgebra import Chart, SuperFunction

__all__ = [
    "VolumeForm",
    "delta0",
    "log_derivative_bracket",
    "delta_rho",
    "delta_rho_squared",
    "divergence",
    "delta_change",
    "modular_hamiltonian",
    "modular_operator",
    "even_modular_field",
]


def _require_darboux(chart: Chart) -> None:
    if len(chart.even_coords) != len(chart.odd_coords):
        raise ChartMismatch(f"chart {chart.name!r} is not of Darboux type")


@dataclass(frozen=True)
class VolumeForm:
    """A volume element ``rho D(x, th)`` given by its even coefficient."""

    chart: Chart
    coefficient: SuperFunction

    def __post_init__(self) -> None:
        rho = self.coefficient
        if rho.chart != self.chart:
            raise ChartMismatch("volume coefficient must live on the stated chart")
        if rho.parity() != 0:
            raise ParityViolation("volume coefficient must be even")
        if rho.body().is_zero():
            raise NonInvertibleBody("volume coefficient must have invertible body")

    @classmethod
    def standard(cls, chart: Chart) -> "VolumeForm":
        return cls(chart, SuperFunction.one(chart))

    def sqrt(self) -> SuperFunction:
        """The coefficient of the square-root semidensity (exact)."""
        return self.coefficient.sqrt_even()

    def rescale(self, factor: SuperFunction) -> "VolumeForm":
        return VolumeForm(self.chart, self.coefficient * factor)


def delta0(f: SuperFunction) -> SuperFunction:
    """The coordinate odd Laplacian ``sum_i d^2 f / dx^i dth_i``."""
    chart = f.chart
    _require_darboux(chart)
    result = SuperFunction.zero(chart)
    for x_name, th_name in zip(chart.even_coords, chart.odd_coords):
        result = result + f.partial_odd(th_name).partial_even(x_name)
    return result


def log_derivative_bracket(rho: SuperFunction, f: SuperFunction) -> SuperFunction:
    """``{log rho, f}`` expanded via ``invert(rho) * d(rho)``.

    ``rho`` must be even with invertible body; the bracket of an even
    element carries no extra signs:
    ``{log rho, f} = sum_i ( dlog/dx^i df/dth_i + dlog/dth_i df/dx^i )``.
    """
    chart = f.chart
    _require_darboux(chart)
    if rho.chart != chart:
        raise ChartMismatch("volume and argument live on different charts")
    if rho.parity() != 0:
        raise ParityViolation("logarithmic derivative requires an even element")
    rho_inv = rho.invert()
    result = SuperFunction.zero(chart)
    for x_name, th_name in zip(chart.even_coords, chart.odd_coords):
        result = result + (rho_inv * rho.partial_even(x_name)) * f.partial_odd(th_name)
        result = result + (rho_inv * rho.partial_odd(th_name)) * f.partial_even(x_name)
    return result


def delta_rho(volume: VolumeForm, f: SuperFunction) -> SuperFunction:
    """The odd Laplacian of ``f`` with respect to the volume element."""
    return delta0(f) + log_derivative_bracket(volume.coefficient, f).scale(Fraction(1, 2))


def delta_rho_squared(volume: VolumeForm, f: SuperFunction) -> SuperFunction:
    """``Delta_rho(Delta_rho f)`` — the nilpotency defect applied to ``f``."""
    return delta_rho(volume, delta_rho(volume, f))


def divergence(volume: VolumeForm, f: SuperFunction) -> SuperFunction:
    """Divergence of the Hamiltonian field of ``f``: ``2 (-1)^{p(f)} Delta_rho f``.

    Requires homogeneous ``f`` (the sign depends on its parity).
    """
    p = f.parity_or_raise("divergence argument")
    out = delta_rho(volume, f).scale(2)
    return -out if p else out


def delta_change(volume: VolumeForm, factor: SuperFunction, f: SuperFunction) -> SuperFunction:
    """``Delta_{g rho} f - Delta_rho f`` for an even invertible factor ``g``.

    Equals ``(1/2) {log g, f}``; computed from the two Laplacians so tests
    can verify that identity independently.
    """
    rescaled = volume.rescale(factor)
    return delta_rho(rescaled, f) - delta_rho(volume, f)


def modular_hamiltonian(volume: VolumeForm, other: VolumeForm) -> SuperFunction:
    """The odd Hamiltonian comparing two volume elements.

    For ``rho' = g rho`` this is ``H = invert(sqrt(g)) * Delta_rho(sqrt(g))``;
    it generates the difference of the squared Laplacians:
    ``Delta_{rho'}^2 - Delta_rho^2 = {H, .}``.
    """
    if other.chart != volume.chart:
        raise ChartMismatch("volume elements live on different charts")
    g = other.coefficient * volume.coefficient.invert()
    root = g.sqrt_even()
    return root.invert() * delta_rho(volume, root)


def modular_operator(
    structure: PoissonStructure, rho: SuperFunction, f: SuperFunction
) -> SuperFunction:
    """``(1/2) (-1)^{p(f)} div_rho D_f`` for any conjugate-pair bracket.

    The divergence of a homogeneous vector field ``X = sum X^A d_A`` (left
    components ``X^A = {f, z^A}``) with respect to ``rho`` is

        div_rho X = invert(rho) * sum_A (-1)^{p(z^A)(p(X)+1)} d_A(rho X^A).

    For the canonical odd bracket this operator *is* ``Delta_rho``; for an
    even bracket the second-order part cancels and a first-order (modular)
    vector field remains.  Mixed-parity ``f`` is handled by linearity.
    """
    chart = structure.chart
    if rho.chart != chart or f.chart != chart:
        raise ChartMismatch("operands must live on the structure's chart")
    if rho.parity() != 0:
        raise ParityViolation("volume coefficient must be even")
    rho_inv = rho.invert()
    names: list[str] = []
    for u, v in structure.pairs:
        names.append(u)
        names.append(v)
    result = SuperFunction.zero(chart)
    for part in (f.even_part(), f.odd_part()):
        if part.is_zero():
            continue
        pf = part.parity() or 0
        p_field = (pf + structure.parity) & 1
        acc = SuperFunction.zero(chart)
        for name in names:
            p_gen = 0 if name in chart._even_index else 1  # type: ignore[attr-defined]
            component = structure.bracket(part, SuperFunction.generator(chart, name))
            if component.is_zero():
                continue
            term = (rho * component).derivative(name)
            if (p_gen * (p_field + 1)) & 1:
                term = -term
            acc = acc + term
        acc = (rho_inv * acc).scale(Fraction(1, 2))
        result = result + (-acc if pf else acc)
    return result


def even_modular_field(
    structure: PoissonStructure, rho: SuperFunction, f: SuperFunction
) -> SuperFunction:
    """The modular vector field of an even bracket applied to ``f``.

    This is :func:`modular_operator` restricted to even structures, where it
    is first order (a derivation) because the naive second-order part
    cancels against the bracket's antisymmetry.
    """
    if structure.parity & 1:
        raise ParityViolation("the modular vector field is for even brackets")
    return modular_operator(structure, rho, f)
