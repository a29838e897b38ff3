"""Named batches of exact identity checks, deterministic for a given seed.

Every item evaluates an identity at exact equality over seeded random
samples (plus a few frozen pinned examples) and reports one line per
identity tag.  The same batches back the command-line ``suite`` subcommand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Any, Callable, Iterable

from . import brackets, charts, forms, laplacians, master, sampling
from .charts import Density, Transition
from .laplacians import VolumeForm
from .superalgebra import Chart, SuperFunction

SUITE_NAMES = ("axioms", "laplacian", "bv", "fourier", "master", "all")
DEFAULT_COUNT = 12


@dataclass(frozen=True)
class SuiteItem:
    """One identity, the number of exact checks run, and the outcome."""

    tag: str
    description: str
    checked: int
    passed: bool
    witness: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.tag}: {self.description} ({self.checked} checks)"
        if not self.passed and self.witness:
            text += f" -- witness: {self.witness}"
        return text

    def to_dict(self) -> dict[str, Any]:
        return {
            "tag": self.tag,
            "description": self.description,
            "checked": self.checked,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class SuiteReport:
    name: str
    dimension: int
    seed: int
    count: int
    items: tuple[SuiteItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def lines(self) -> list[str]:
        header = (
            f"suite {self.name} (n={self.dimension}, seed={self.seed}, "
            f"count={self.count})"
        )
        footer = "all identities hold" if self.passed else "FAILURES detected"
        return [header] + [item.line() for item in self.items] + [footer]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.name,
            "n": self.dimension,
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "items": [item.to_dict() for item in self.items],
        }


def _run_item(
    tag: str,
    description: str,
    cases: Iterable[Callable[[], str | None]],
) -> SuiteItem:
    """Run thunks returning ``None`` on success or a witness string."""
    checked = 0
    for case in cases:
        checked += 1
        witness = case()
        if witness is not None:
            return SuiteItem(tag, description, checked, False, witness)
    return SuiteItem(tag, description, checked, True)


# -- axioms -------------------------------------------------------------------------


def _axiom_items(n: int, rng: Random, count: int) -> list[SuiteItem]:
    chart = sampling.default_chart(n)
    triples = [
        tuple(
            sampling.random_superfunction(rng, chart, parity=rng.randint(0, 1))
            for _ in range(3)
        )
        for _ in range(count)
    ]
    report = brackets.check_axioms(brackets.odd_poisson_bracket, 1, triples=triples)
    witness = "; ".join(report.failures[:2])

    def item(tag: str, description: str, ok: bool) -> SuiteItem:
        return SuiteItem(tag, description, count, ok, "" if ok else witness)

    return [
        item(
            "bracket-parity-shift",
            "the bracket of homogeneous arguments shifts parity by one",
            report.parity_ok,
        ),
        item(
            "bracket-shifted-antisymmetry",
            "graded antisymmetry holds with both parities shifted by one",
            report.antisymmetry_ok,
        ),
        item(
            "bracket-left-leibniz",
            "the bracket differentiates pointwise products on the right slot",
            report.leibniz_ok,
        ),
        item(
            "bracket-shifted-jacobi",
            "the graded Jacobi identity holds with shifted parities",
            report.jacobi_ok,
        ),
    ]


# -- laplacian ----------------------------------------------------------------------


def _laplacian_items(n: int, rng: Random, count: int) -> list[SuiteItem]:
    chart = sampling.default_chart(n)
    items: list[SuiteItem] = []

    def squares_to_zero() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            f = sampling.random_superfunction(rng, chart)

            def case(f: SuperFunction = f) -> str | None:
                defect = laplacians.delta0(laplacians.delta0(f))
                return None if defect.is_zero() else f"f = {f}"

            yield case

    items.append(
        _run_item(
            "flat-laplacian-squares-to-zero",
            "the coordinate Laplacian is nilpotent on functions",
            squares_to_zero(),
        )
    )

    def semidensity_squares() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            s = sampling.random_semidensity(rng, chart)

            def case(s: Density = s) -> str | None:
                twice = charts.canonical_delta(charts.canonical_delta(s))
                return None if twice.coefficient.is_zero() else f"s = {s.coefficient}"

            yield case

    items.append(
        _run_item(
            "semidensity-laplacian-squares-to-zero",
            "the canonical Laplacian on half-densities is nilpotent",
            semidensity_squares(),
        )
    )

    def product_rule() -> Iterable[Callable[[], str | None]]:
        for index in range(count):
            volume = sampling.random_volume(
                rng, chart, degree=2, rational=index % 3 == 0
            )
            parity = rng.randint(0, 1)
            f = sampling.random_superfunction(rng, chart, degree=2, parity=parity)
            g = sampling.random_superfunction(rng, chart, degree=2)

            def case(
                volume: VolumeForm = volume,
                f: SuperFunction = f,
                g: SuperFunction = g,
                parity: int = parity,
            ) -> str | None:
                sign = -1 if parity else 1
                lhs = laplacians.delta_rho(volume, f * g)
                rhs = (
                    laplacians.delta_rho(volume, f) * g
                    + brackets.odd_poisson_bracket(f, g).scale(sign)
                    + (f * laplacians.delta_rho(volume, g)).scale(sign)
                )
                return None if lhs == rhs else f"f = {f}; g = {g}"

            yield case

    items.append(
        _run_item(
            "weighted-laplacian-product-rule",
            "the weighted Laplacian deviates from a derivation by the bracket",
            product_rule(),
        )
    )

    def bracket_preservation() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            volume = sampling.random_square_volume(rng, chart, degree=2)
            parity = rng.randint(0, 1)
            f = sampling.random_superfunction(rng, chart, degree=2, parity=parity)
            g = sampling.random_superfunction(rng, chart, degree=2)

            def case(
                volume: VolumeForm = volume,
                f: SuperFunction = f,
                g: SuperFunction = g,
                parity: int = parity,
            ) -> str | None:
                sign = -1 if (parity + 1) & 1 else 1
                lhs = laplacians.delta_rho(volume, brackets.odd_poisson_bracket(f, g))
                rhs = brackets.odd_poisson_bracket(
                    laplacians.delta_rho(volume, f), g
                ) + brackets.odd_poisson_bracket(
                    f, laplacians.delta_rho(volume, g)
                ).scale(sign)
                return None if lhs == rhs else f"f = {f}; g = {g}"

            yield case

    items.append(
        _run_item(
            "weighted-laplacian-preserves-bracket",
            "the weighted Laplacian is a derivation of the odd bracket",
            bracket_preservation(),
        )
    )

    def divergence_match() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            volume = sampling.random_volume(rng, chart, degree=2)
            parity = rng.randint(0, 1)
            f = sampling.random_superfunction(rng, chart, degree=2, parity=parity)

            def case(
                volume: VolumeForm = volume,
                f: SuperFunction = f,
                parity: int = parity,
            ) -> str | None:
                scale = -2 if parity else 2
                lhs = laplacians.divergence(volume, f)
                rhs = laplacians.delta_rho(volume, f).scale(scale)
                return None if lhs == rhs else f"f = {f}"

            yield case

    items.append(
        _run_item(
            "divergence-is-twice-laplacian",
            "the weighted divergence equals twice the signed weighted Laplacian",
            divergence_match(),
        )
    )

    def squared_is_bracket() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            volume = sampling.random_square_volume(rng, chart, degree=2)
            f = sampling.random_superfunction(rng, chart, degree=2)

            def case(volume: VolumeForm = volume, f: SuperFunction = f) -> str | None:
                root = volume.sqrt()
                hamiltonian = laplacians.delta0(root) * root.invert()
                lhs = laplacians.delta_rho_squared(volume, f)
                rhs = brackets.odd_poisson_bracket(hamiltonian, f)
                return None if lhs == rhs else f"f = {f}"

            yield case

    items.append(
        _run_item(
            "squared-laplacian-is-root-quotient-bracket",
            "the squared weighted Laplacian is the bracket with the root's quotient",
            squared_is_bracket(),
        )
    )

    def cocycle() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            volume = sampling.random_volume(rng, chart, degree=2)
            factor_root = sampling.random_volume(rng, chart, degree=1).coefficient
            other = volume.rescale(factor_root * factor_root)
            f = sampling.random_superfunction(rng, chart, degree=2)

            def case(
                volume: VolumeForm = volume,
                other: VolumeForm = other,
                f: SuperFunction = f,
            ) -> str | None:
                hamiltonian = laplacians.modular_hamiltonian(volume, other)
                lhs = laplacians.delta_rho_squared(
                    other, f
                ) - laplacians.delta_rho_squared(volume, f)
                rhs = brackets.odd_poisson_bracket(hamiltonian, f)
                return None if lhs == rhs else f"f = {f}"

            yield case

    items.append(
        _run_item(
            "modular-cocycle-between-volumes",
            "squared weighted Laplacians of two volumes differ by a modular bracket",
            cocycle(),
        )
    )

    return items


# -- bv -----------------------------------------------------------------------------


def _bv_items(n: int, rng: Random, count: int) -> list[SuiteItem]:
    chart = sampling.default_chart(n, externals=("eps1",))
    roster = sampling.transition_roster(rng, chart, count=count)
    items: list[SuiteItem] = []

    items.append(
        _run_item(
            "transition-preserves-bracket",
            "every sampled transition is a canonical coordinate change",
            (
                (
                    lambda t=t: None
                    if charts.is_symplectomorphism(t)
                    else f"images: { {k: str(v) for k, v in sorted(t.images.items())} }"
                )
                for t in roster
            ),
        )
    )

    items.append(
        _run_item(
            "square-root-berezinian-is-closed",
            "the square-root Berezinian is annihilated by the coordinate Laplacian",
            (
                (
                    lambda t=t: None
                    if charts.bv_identity(t).is_zero()
                    else f"defect: {charts.bv_identity(t)}"
                )
                for t in roster
            ),
        )
    )

    def equivariance() -> Iterable[Callable[[], str | None]]:
        for t in roster:
            f = sampling.random_superfunction(rng, chart, degree=2)

            def case(t: Transition = t, f: SuperFunction = f) -> str | None:
                defect = charts.laplacian_conjugation_defect(t, f)
                return None if defect.is_zero() else f"f = {f}"

            yield case

    items.append(
        _run_item(
            "laplacian-transform-equivariance",
            "transforming then applying the Laplacian matches the conjugated law",
            equivariance(),
        )
    )

    def transport_cocycle() -> Iterable[Callable[[], str | None]]:
        for index in range(max(count // 2, 1)):
            first = roster[rng.randrange(len(roster))]
            second = roster[rng.randrange(len(roster))]
            s = sampling.random_semidensity(rng, chart, degree=2)

            def case(
                first: Transition = first,
                second: Transition = second,
                s: Density = s,
            ) -> str | None:
                stepwise = charts.transform_density(
                    charts.transform_density(s, first), second
                )
                direct = charts.transform_density(s, first.compose(second))
                return None if stepwise == direct else f"s = {s.coefficient}"

            yield case

    items.append(
        _run_item(
            "half-density-transport-cocycle",
            "transporting a half-density through a composition matches two steps",
            transport_cocycle(),
        )
    )

    def scaling_example() -> Iterable[Callable[[], str | None]]:
        def case() -> str | None:
            line = Chart.darboux(1)
            doubling = Transition.scaling(line, line, [2])
            value = charts.berezinian(doubling)
            expected = SuperFunction.one(line).scale(4)
            return None if value == expected else f"berezinian = {value}"

        yield case

    items.append(
        _run_item(
            "berezinian-diagonal-scaling-example",
            "doubling the even line coordinate has Berezinian four",
            scaling_example(),
        )
    )

    return items


# -- fourier ------------------------------------------------------------------------


def _fourier_items(n: int, rng: Random, count: int) -> list[SuiteItem]:
    fchart = Chart.forms(n)
    dchart = forms.darboux_partner(fchart)
    items: list[SuiteItem] = []

    def round_trip() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            omega = sampling.random_superfunction(rng, fchart)
            s = sampling.random_semidensity(rng, dchart)

            def case(omega: SuperFunction = omega, s: Density = s) -> str | None:
                back = forms.semidensity_to_form(forms.form_to_semidensity(omega))
                if back != omega:
                    return f"omega = {omega}"
                again = forms.form_to_semidensity(forms.semidensity_to_form(s))
                return None if again == s else f"s = {s.coefficient}"

            yield case

    items.append(
        _run_item(
            "parity-transform-round-trip",
            "the form-to-semidensity transform and its inverse compose to identity",
            round_trip(),
        )
    )

    def intertwine() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            omega = sampling.random_superfunction(rng, fchart)

            def case(omega: SuperFunction = omega) -> str | None:
                lhs = charts.canonical_delta(forms.form_to_semidensity(omega))
                rhs = forms.form_to_semidensity(forms.de_rham(omega))
                return None if lhs == rhs else f"omega = {omega}"

            yield case

    items.append(
        _run_item(
            "transform-intertwines-derivative",
            "the canonical Laplacian matches the exterior derivative across the transform",
            intertwine(),
        )
    )

    def de_rham_squares() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            omega = sampling.random_superfunction(rng, fchart)

            def case(omega: SuperFunction = omega) -> str | None:
                twice = forms.de_rham(forms.de_rham(omega))
                return None if twice.is_zero() else f"omega = {omega}"

            yield case

    items.append(
        _run_item(
            "de-rham-squares-to-zero",
            "the exterior derivative on form avatars is nilpotent",
            de_rham_squares(),
        )
    )

    def contraction() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            omega = sampling.random_superfunction(rng, fchart)
            index = rng.randint(1, n)

            def case(omega: SuperFunction = omega, index: int = index) -> str | None:
                image = forms.form_to_semidensity(omega)
                theta = SuperFunction.generator(dchart, f"th{index}")
                lhs = Density.semidensity(theta * image.coefficient)
                rhs = forms.form_to_semidensity(omega.partial_odd(f"xi{index}"))
                return None if lhs == rhs else f"omega = {omega}; index = {index}"

            yield case

    items.append(
        _run_item(
            "odd-multiplication-is-contraction",
            "multiplying the image by an odd coordinate contracts the source form",
            contraction(),
        )
    )

    return items


# -- master -------------------------------------------------------------------------


def _master_items(n: int, rng: Random, count: int) -> list[SuiteItem]:
    chart = sampling.default_chart(n, externals=("eps1",))
    items: list[SuiteItem] = []

    def exponential_identity() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            g = sampling.random_nilpotent_even(rng, chart)

            def case(g: SuperFunction = g) -> str | None:
                master.exp_identity_residual(g)
                return None

            yield case

    items.append(
        _run_item(
            "exponential-laplacian-identity",
            "the Laplacian of a nilpotent exponential factors through the residual",
            exponential_identity(),
        )
    )

    def hbar_limit() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            action = sampling.random_superfunction(rng, chart, parity=0)

            def case(action: SuperFunction = action) -> str | None:
                quantum = master.quantum_master_residual(action)
                pieces = quantum.coefficients_in_param(master.HBAR)
                zero_order = pieces.get(0, SuperFunction.zero(chart))
                classical = master.classical_master_residual(action)
                return None if zero_order == classical else f"S = {action}"

            yield case

    items.append(
        _run_item(
            "quantum-classical-limit-consistency",
            "the order-zero quantum residual is the classical residual",
            hbar_limit(),
        )
    )

    def exactness() -> Iterable[Callable[[], str | None]]:
        for _ in range(count):
            r = sampling.random_semidensity(rng, chart)

            def case(r: Density = r) -> str | None:
                s = charts.canonical_delta(r)
                report = master.semidensity_master_check(s, candidate=r)
                if not report.closed:
                    return f"r = {r.coefficient}"
                return None if report.exact_matches else f"r = {r.coefficient}"

            yield case

    items.append(
        _run_item(
            "exact-semidensities-are-closed",
            "Laplacian images of half-densities satisfy the closedness condition",
            exactness(),
        )
    )

    def proportionality_chain() -> Iterable[Callable[[], str | None]]:
        def flat_case() -> str | None:
            report = master.nu_constant(VolumeForm.standard(chart))
            if not report.nu.is_zero() or not report.root_closed:
                return "flat volume"
            return None

        yield flat_case

        def witness_case() -> str | None:
            x1 = SuperFunction.generator(chart, "x1")
            th1 = SuperFunction.generator(chart, "th1")
            eps = SuperFunction.generator(chart, "eps1")
            root = SuperFunction.one(chart) - x1 * th1 * eps
            volume = VolumeForm(chart, root * root)
            report = master.nu_constant(volume)
            if report.root_closed:
                return "witness root reported closed"
            expected = -eps
            if report.nu != expected:
                return f"nu = {report.nu}"
            for _ in range(3):
                f = sampling.random_superfunction(rng, chart, degree=2)
                if not laplacians.delta_rho_squared(volume, f).is_zero():
                    return f"f = {f}"
            return None

        yield witness_case

        def error_case() -> str | None:
            x1 = SuperFunction.generator(chart, "x1")
            th1 = SuperFunction.generator(chart, "th1")
            if n >= 2:
                x2 = SuperFunction.generator(chart, "x2")
                th2 = SuperFunction.generator(chart, "th2")
                root = SuperFunction.one(chart) + x1 * x2 * th1 * th2
            else:
                eps = SuperFunction.generator(chart, "eps1")
                root = SuperFunction.one(chart) + x1 * x1 * th1 * eps
            volume = VolumeForm(chart, root * root)
            try:
                master.nu_constant(volume)
            except master.NotProportional as error:
                hamiltonian = error.hamiltonian
                for _ in range(3):
                    f = sampling.random_superfunction(rng, chart, degree=2)
                    lhs = laplacians.delta_rho_squared(volume, f)
                    rhs = brackets.odd_poisson_bracket(hamiltonian, f)
                    if lhs != rhs:
                        return f"f = {f}"
                return None
            return "nonconstant quotient was not reported"

        yield error_case

    items.append(
        _run_item(
            "constant-proportionality-chain",
            "closed roots give zero constants, witnesses give external constants, "
            "and nonconstant quotients reproduce the squared Laplacian",
            proportionality_chain(),
        )
    )

    def zero_form_constant() -> Iterable[Callable[[], str | None]]:
        def case() -> str | None:
            plane = Chart.darboux(2)
            partner = forms.forms_partner(plane)
            c = rng.choice((1, 2, 3))
            th1 = SuperFunction.generator(plane, "th1")
            th2 = SuperFunction.generator(plane, "th2")
            root = SuperFunction.one(plane) + (th1 * th2).scale(c)
            expected = SuperFunction.one(partner).scale(c)
            report = master.nu_constant(VolumeForm(plane, root * root))
            if not report.root_closed:
                return "root not closed"
            if report.zero_form_constant != expected:
                return f"constant = {report.zero_form_constant}"
            return None

        yield case

    items.append(
        _run_item(
            "closed-root-zero-form-constant",
            "a closed root's form avatar carries the expected constant component",
            zero_form_constant(),
        )
    )

    return items


# -- driver -------------------------------------------------------------------------


_BUILDERS: dict[str, Callable[[int, Random, int], list[SuiteItem]]] = {
    "axioms": _axiom_items,
    "laplacian": _laplacian_items,
    "bv": _bv_items,
    "fourier": _fourier_items,
    "master": _master_items,
}


def run_suite(
    name: str, n: int = 2, seed: int = 0, count: int = DEFAULT_COUNT
) -> SuiteReport:
    """Run one named suite (or ``all``) at the given dimension and seed."""
    if name not in SUITE_NAMES:
        raise ValueError(
            f"unknown suite {name!r}; choose one of {', '.join(SUITE_NAMES)}"
        )
    if count < 1:
        raise ValueError("count must be positive")
    if name == "all":
        items: list[SuiteItem] = []
        for sub in SUITE_NAMES[:-1]:
            items.extend(run_suite(sub, n=n, seed=seed, count=count).items)
        return SuiteReport("all", n, seed, count, tuple(items))
    rng = Random(seed)
    return SuiteReport(name, n, seed, count, tuple(_BUILDERS[name](n, rng, count)))
