"""Poisson brackets of either parity on charts with conjugate pairs.

The central case is the odd Poisson (Buttin) bracket on a Darboux chart with
pairs ``x^i, th_i``:

    {f, g} = sum_i ( df/dx^i * dg/dth_i + (-1)^{p(f)} df/dth_i * dg/dx^i ),

all derivatives acting from the left.  The same machinery supports an even
or odd bracket for arbitrary conjugate pairs ``(u^A, v_A)`` with
``p(v_A) = p(u_A) + eps``, which covers cotangent and parity-reversed
cotangent charts and hence derived brackets on a base from a fiber-quadratic
structure Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    ChartMismatch,
    NotFiberQuadratic,
    ParityViolation,
)
from .superalgebra import Chart, SuperFunction

__all__ = [
    "PoissonStructure",
    "odd_poisson_bracket",
    "hamiltonian_apply",
    "hamiltonian_vector_field",
    "AxiomReport",
    "check_axioms",
    "jacobi_defect",
    "CotangentStructure",
    "MasterHamiltonian",
    "derived_bracket",
    "master_condition",
]


def _parity_of_generator(chart: Chart, name: str) -> int:
    if name in chart._even_index:  # type: ignore[attr-defined]
        return 0
    chart.odd_index(name)
    return 1


@dataclass(frozen=True)
class PoissonStructure:
    """A constant-coefficient bracket given by conjugate pairs.

    ``pairs`` lists ``(u, v)`` generator names with ``{u, g} = + dg/dv`` and
    ``{v, g} = -(-1)^{p(u)(p(u)+parity)} dg/du``; ``parity`` is the bracket's
    parity shift (1 for an odd bracket, 0 for an even one).
    """

    chart: Chart
    pairs: tuple[tuple[str, str], ...]
    parity: int

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for u, v in self.pairs:
            pu = _parity_of_generator(self.chart, u)
            pv = _parity_of_generator(self.chart, v)
            if (pu + self.parity) % 2 != pv:
                raise ParityViolation(
                    f"pair ({u!r}, {v!r}) violates the parity shift {self.parity}"
                )
            if u in seen or v in seen or u == v:
                raise ValueError("conjugate pairs must use distinct generators")
            seen.add(u)
            seen.add(v)

    @classmethod
    def darboux_odd(cls, chart: Chart) -> "PoissonStructure":
        """The canonical odd bracket pairing ``x^i`` with ``th_i``."""
        if len(chart.even_coords) != len(chart.odd_coords):
            raise ChartMismatch(
                f"chart {chart.name!r} does not pair its even and odd coordinates"
            )
        return cls(chart, tuple(zip(chart.even_coords, chart.odd_coords)), 1)

    def bracket(self, f: SuperFunction, g: SuperFunction) -> SuperFunction:
        """The bracket ``{f, g}``; no homogeneity assumptions on ``f``, ``g``."""
        if f.chart != self.chart or g.chart != self.chart:
            raise ChartMismatch("bracket operands must live on the structure's chart")
        result = SuperFunction.zero(self.chart)
        parts = [p for p in (f.even_part(), f.odd_part()) if not p.is_zero()]
        eps = self.parity & 1
        for part in parts:
            pf = part.parity() or 0
            for u, v in self.pairs:
                a = _parity_of_generator(self.chart, u)
                b = (a + eps) & 1
                sign_uv = -1 if (a * (pf + a)) & 1 else 1
                sign_vu = -1 if (a * b + b * (pf + b)) & 1 else 1
                du = part.derivative(u)
                if not du.is_zero():
                    result = result + (du * g.derivative(v)).scale(sign_uv)
                dv = part.derivative(v)
                if not dv.is_zero():
                    result = result - (dv * g.derivative(u)).scale(sign_vu)
        return result


def odd_poisson_bracket(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    """Canonical odd bracket on a Darboux chart (pairs ``x^i, th_i``)."""
    chart = f.chart
    if g.chart != chart:
        raise ChartMismatch("bracket operands live on different charts")
    if len(chart.even_coords) != len(chart.odd_coords):
        raise ChartMismatch(f"chart {chart.name!r} is not of Darboux type")
    f_even = f.even_part()
    f_odd = f.odd_part()
    result = SuperFunction.zero(chart)
    for x_name, th_name in zip(chart.even_coords, chart.odd_coords):
        dg_dth = g.partial_odd(th_name)
        dg_dx = g.partial_even(x_name)
        if not f_even.is_zero():
            result = result + f_even.partial_even(x_name) * dg_dth
            result = result + f_even.partial_odd(th_name) * dg_dx
        if not f_odd.is_zero():
            result = result + f_odd.partial_even(x_name) * dg_dth
            result = result - f_odd.partial_odd(th_name) * dg_dx
    return result


def hamiltonian_apply(f: SuperFunction, g: SuperFunction) -> SuperFunction:
    """Apply the Hamiltonian derivation of ``f``: ``D_f g = {f, g}``."""
    return odd_poisson_bracket(f, g)


def hamiltonian_vector_field(f: SuperFunction) -> dict[str, SuperFunction]:
    """Components of ``D_f`` on the generators: ``{name: {f, name}}``."""
    chart = f.chart
    out: dict[str, SuperFunction] = {}
    for name in chart.even_coords + chart.odd_coords:
        out[name] = odd_poisson_bracket(f, SuperFunction.generator(chart, name))
    return out


# -- axiom checking ---------------------------------------------------------------


@dataclass
class AxiomReport:
    """Outcome of bracket-axiom checks over a family of inputs."""

    parity: int
    triples_checked: int = 0
    failures: list[str] = field(default_factory=list)
    parity_ok: bool = True
    antisymmetry_ok: bool = True
    leibniz_ok: bool = True
    jacobi_ok: bool = True

    @property
    def all_ok(self) -> bool:
        return self.parity_ok and self.antisymmetry_ok and self.leibniz_ok and self.jacobi_ok


def _check_one_triple(
    report: AxiomReport,
    eps: int,
    f: SuperFunction,
    g: SuperFunction,
    h: SuperFunction,
    fg: SuperFunction,
    gf: SuperFunction,
    gh: SuperFunction,
    hf: SuperFunction,
    fh: SuperFunction,
    f_of_prod_gh: SuperFunction,
    f_of_gh: SuperFunction,
    g_of_hf: SuperFunction,
    h_of_fg: SuperFunction,
    label: str,
) -> None:
    pf = f.parity_or_raise("axiom input")
    pg = g.parity_or_raise("axiom input")
    ph = h.parity_or_raise("axiom input")

    expected_parity = (pf + pg + eps) & 1
    if not fg.is_zero() and fg.parity() != expected_parity:
        report.parity_ok = False
        report.failures.append(f"parity: p({{f,g}}) != p(f)+p(g)+{eps} for {label}")

    sign = -1 if ((pf + eps) * (pg + eps)) & 1 else 1
    if not (fg + gf.scale(sign)).is_zero():
        report.antisymmetry_ok = False
        report.failures.append(f"antisymmetry violated for {label}")

    leib_sign = -1 if ((pf + eps) * pg) & 1 else 1
    residue = f_of_prod_gh - fg * h - (g * fh).scale(leib_sign)
    if not residue.is_zero():
        report.leibniz_ok = False
        report.failures.append(f"Leibniz rule violated for {label}")

    s_fh = -1 if ((pf + eps) * (ph + eps)) & 1 else 1
    s_gf = -1 if ((pg + eps) * (pf + eps)) & 1 else 1
    s_hg = -1 if ((ph + eps) * (pg + eps)) & 1 else 1
    jac = f_of_gh.scale(s_fh) + g_of_hf.scale(s_gf) + h_of_fg.scale(s_hg)
    if not jac.is_zero():
        report.jacobi_ok = False
        report.failures.append(f"Jacobi identity violated for {label}")

    report.triples_checked += 1


def check_axioms(
    bracket: Callable[[SuperFunction, SuperFunction], SuperFunction],
    eps: int,
    *,
    functions: Sequence[SuperFunction] | None = None,
    triples: Iterable[tuple[SuperFunction, SuperFunction, SuperFunction]] | None = None,
    max_failures: int = 16,
) -> AxiomReport:
    """Verify parity, graded antisymmetry, Leibniz, and graded Jacobi.

    Either pass ``functions`` (every ordered triple of the family is checked,
    with pairwise brackets and products computed once) or an explicit
    iterable of ``triples``.  All inputs must be parity-homogeneous.
    """
    report = AxiomReport(parity=eps & 1)
    eps = eps & 1
    if (functions is None) == (triples is None):
        raise ValueError("pass exactly one of functions= or triples=")

    if functions is not None:
        fns = list(functions)
        btab = [[bracket(a, b) for b in fns] for a in fns]
        ptab = [[a * b for b in fns] for a in fns]
        for i, f in enumerate(fns):
            for j, g in enumerate(fns):
                for k, h in enumerate(fns):
                    if len(report.failures) >= max_failures:
                        report.failures.append("... further failures suppressed")
                        return report
                    _check_one_triple(
                        report,
                        eps,
                        f,
                        g,
                        h,
                        btab[i][j],
                        btab[j][i],
                        btab[j][k],
                        btab[k][i],
                        btab[i][k],
                        bracket(f, ptab[j][k]),
                        bracket(f, btab[j][k]),
                        bracket(g, btab[k][i]),
                        bracket(h, btab[i][j]),
                        f"triple ({i},{j},{k})",
                    )
        return report

    for idx, (f, g, h) in enumerate(triples):
        if len(report.failures) >= max_failures:
            report.failures.append("... further failures suppressed")
            break
        fg = bracket(f, g)
        gf = bracket(g, f)
        gh = bracket(g, h)
        hf = bracket(h, f)
        fh = bracket(f, h)
        _check_one_triple(
            report,
            eps,
            f,
            g,
            h,
            fg,
            gf,
            gh,
            hf,
            fh,
            bracket(f, g * h),
            bracket(f, gh),
            bracket(g, hf),
            bracket(h, fg),
            f"triple #{idx}",
        )
    return report


def jacobi_defect(
    bracket: Callable[[SuperFunction, SuperFunction], SuperFunction],
    eps: int,
    f: SuperFunction,
    g: SuperFunction,
    h: SuperFunction,
) -> SuperFunction:
    """The graded-Jacobi cyclic sum (zero iff the identity holds here)."""
    pf = f.parity_or_raise("jacobi input")
    pg = g.parity_or_raise("jacobi input")
    ph = h.parity_or_raise("jacobi input")
    eps = eps & 1
    s1 = -1 if ((pf + eps) * (ph + eps)) & 1 else 1
    s2 = -1 if ((pg + eps) * (pf + eps)) & 1 else 1
    s3 = -1 if ((ph + eps) * (pg + eps)) & 1 else 1
    return (
        bracket(f, bracket(g, h)).scale(s1)
        + bracket(g, bracket(h, f)).scale(s2)
        + bracket(h, bracket(f, g)).scale(s3)
    )


# -- cotangent-type structures and derived brackets ---------------------------------


@dataclass(frozen=True)
class CotangentStructure:
    """A base chart together with its (parity-reversed or plain) cotangent chart.

    ``reversed_fibers`` selects the parity of the momentum generators: with
    ``False`` momenta copy their coordinate's parity (even bracket on the
    total space); with ``True`` they flip it (odd bracket).
    """

    base: Chart
    chart: Chart = field(init=False, compare=False, repr=False)
    structure: PoissonStructure = field(init=False, compare=False, repr=False)
    reversed_fibers: bool = False

    def __post_init__(self) -> None:
        base = self.base
        eps = 1 if self.reversed_fibers else 0
        even_momenta_of_even: tuple[str, ...] = ()
        odd_momenta_of_even: tuple[str, ...] = ()
        even_momenta_of_odd: tuple[str, ...] = ()
        odd_momenta_of_odd: tuple[str, ...] = ()
        if self.reversed_fibers:
            odd_momenta_of_even = tuple(f"{x}s" for x in base.even_coords)
            even_momenta_of_odd = tuple(f"{t}s" for t in base.odd_coords)
        else:
            even_momenta_of_even = tuple(f"p{x}" for x in base.even_coords)
            odd_momenta_of_odd = tuple(f"p{t}" for t in base.odd_coords)
        chart = Chart(
            name=f"T*{base.name}" if not self.reversed_fibers else f"PiT*{base.name}",
            even_coords=base.even_coords + even_momenta_of_even + even_momenta_of_odd,
            odd_coords=base.odd_coords,
            fiber_odds=odd_momenta_of_even + odd_momenta_of_odd,
            external_odds=base.external_odds,
            params=base.params,
        )
        pairs: list[tuple[str, str]] = []
        if self.reversed_fibers:
            pairs += [(x, f"{x}s") for x in base.even_coords]
            pairs += [(t, f"{t}s") for t in base.odd_coords]
        else:
            pairs += [(x, f"p{x}") for x in base.even_coords]
            pairs += [(t, f"p{t}") for t in base.odd_coords]
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "structure", PoissonStructure(chart, tuple(pairs), eps))

    @property
    def momentum_names(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.structure.pairs)

    def lift(self, f: SuperFunction) -> SuperFunction:
        """Transport a base function to the total chart."""
        if f.chart != self.base:
            raise ChartMismatch("lift expects a function on the base chart")
        return f.retarget(self.chart)

    def restrict_to_base(self, f: SuperFunction) -> SuperFunction:
        """Set all momenta to zero and land back on the base chart."""
        even_momenta = [n for n in self.momentum_names if n in self.chart._even_index]  # type: ignore[attr-defined]
        odd_mask = 0
        for n in self.momentum_names:
            if n not in even_momenta:
                odd_mask |= 1 << self.chart.odd_index(n)
        reduced = f.drop_odd_bits(odd_mask).set_evens_to_zero(even_momenta)
        return reduced.retarget(self.base)


@dataclass(frozen=True)
class MasterHamiltonian:
    """A fiber-quadratic Hamiltonian on a cotangent-type chart.

    Its derived bracket on the base is ``[f, g] = {f, {S, g}}`` with all
    momenta set to zero afterwards; the bracket's parity equals ``p(S)``
    shifted by the ambient parity.
    """

    ambient: CotangentStructure
    hamiltonian: SuperFunction

    def __post_init__(self) -> None:
        S = self.hamiltonian
        if S.chart != self.ambient.chart:
            raise ChartMismatch("structure Hamiltonian must live on the total chart")
        if S.parity() is None:
            raise ParityViolation("structure Hamiltonian must be parity-homogeneous")
        chart = self.ambient.chart
        even_fibers = [
            chart.even_index(n)
            for n in self.ambient.momentum_names
            if n in chart._even_index  # type: ignore[attr-defined]
        ]
        odd_fiber_mask = 0
        for n in self.ambient.momentum_names:
            if n not in chart._even_index:  # type: ignore[attr-defined]
                odd_fiber_mask |= 1 << chart.odd_index(n)
        for mask, coeff in S.terms.items():
            odd_deg = (mask & odd_fiber_mask).bit_count()
            if not coeff.is_polynomial():
                raise NotFiberQuadratic("structure Hamiltonian must be polynomial in momenta")
            for exps, _ in coeff.num.terms.items():
                even_deg = sum(exps[i] for i in even_fibers)
                if even_deg + odd_deg != 2:
                    raise NotFiberQuadratic(
                        "every term of the structure Hamiltonian must have fiber degree two"
                    )

    @property
    def derived_parity(self) -> int:
        return (self.hamiltonian.parity() or 0) & 1

    def derived_bracket(self, f: SuperFunction, g: SuperFunction) -> SuperFunction:
        return derived_bracket(self, f, g)


def derived_bracket(
    structure: MasterHamiltonian, f: SuperFunction, g: SuperFunction
) -> SuperFunction:
    """The bracket ``[f, g] = {f, {S, g}}`` restricted to the base chart."""
    amb = structure.ambient
    inner = amb.structure.bracket(structure.hamiltonian, amb.lift(g))
    outer = amb.structure.bracket(amb.lift(f), inner)
    return amb.restrict_to_base(outer)


def master_condition(structure: MasterHamiltonian) -> SuperFunction:
    """The self-bracket ``{S, S}`` on the total chart (zero iff master)."""
    S = structure.hamiltonian
    return structure.ambient.structure.bracket(S, S)
