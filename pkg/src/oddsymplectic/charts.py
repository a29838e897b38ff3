"""Coordinate transitions, Berezinians, and densities of rational weight.

A :class:`Transition` encodes a change of Darboux-type coordinates as a
substitution: it stores the *source* coordinates as functions of the
*target* chart.  Its Jacobian uses left derivatives, rows indexed by source
coordinates (even block first), columns by target coordinates; the
Berezinian is

    Ber(J) = det(A - B D^{-1} C) * det(D)^{-1}

for the block split J = [[A, B], [C, D]] along parities.  Densities of
weight ``t`` transform by ``coefficient -> substitute(coefficient) * Ber^t``
(half-integer weights through the exact even square root), so semidensities
are weight one-half.  The canonical odd Laplacian on semidensities acts as
``Delta_0`` on the coefficient in any Darboux system; transitions produced
by the constructors here preserve the canonical bracket, and the associated
invariance statement ``Delta_0(sqrt(Ber)) = 0`` is exposed for verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .brackets import odd_poisson_bracket
from .errors import (
    ChartMismatch,
    InvalidTransition,
    NonInvertibleBody,
    NonTerminatingFlow,
    NotClosed,
    ParityViolation,
)
from .laplacians import delta0, log_derivative_bracket
from .scalar import ScalarLike
from .superalgebra import Chart, SuperFunction

__all__ = [
    "Transition",
    "jacobian",
    "berezinian",
    "sqrt_berezinian",
    "is_symplectomorphism",
    "symplectomorphism_defects",
    "bv_identity",
    "laplacian_conjugation_defect",
    "Density",
    "transform_density",
    "canonical_delta",
    "delta_q",
    "lie_derivative_density",
    "lie_commutator_defect",
    "exponentiate_hamiltonian",
    "NormalityReport",
    "is_normal",
]

Matrix = list[list[SuperFunction]]


# -- small exact linear algebra over the even part of the algebra -------------------


def _mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    rows, inner, cols = len(a), len(b), len(b[0])
    out: Matrix = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                term = a[i][k] * b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def _det_even(m: Matrix, chart: Chart) -> SuperFunction:
    """Determinant of a matrix of commuting (even) entries."""
    size = len(m)
    if size == 0:
        return SuperFunction.one(chart)
    if size == 1:
        return m[0][0]
    result = SuperFunction.zero(chart)
    for i in range(size):
        minor = [row[1:] for r, row in enumerate(m) if r != i]
        cofactor = _det_even(minor, chart)
        term = m[i][0] * cofactor
        result = result + (term if i % 2 == 0 else -term)
    return result


def _inv_even(m: Matrix, chart: Chart) -> Matrix:
    """Inverse via the adjugate; requires an invertible determinant."""
    size = len(m)
    det = _det_even(m, chart)
    det_inv = det.invert()
    if size == 1:
        return [[det_inv]]
    out: Matrix = [[SuperFunction.zero(chart) for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [
                [m[r][c] for c in range(size) if c != j]
                for r in range(size)
                if r != i
            ]
            cof = _det_even(minor, chart)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * det_inv
    return out


# -- transitions ----------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    """A coordinate change, stored as source coordinates in target terms.

    ``images`` maps every source even/odd coordinate name to its expression
    on the target chart; parameters and external constants map to their
    namesakes.  Constructors: :meth:`identity`, :meth:`scaling`,
    :meth:`point`, :meth:`shift_one_form`, and
    :func:`exponentiate_hamiltonian`.
    """

    source: Chart
    target: Chart
    images: Mapping[str, SuperFunction]

    def __post_init__(self) -> None:
        fixed: dict[str, SuperFunction] = {}
        for name in self.source.even_coords + self.source.odd_coords:
            img = self.images.get(name)
            if img is None:
                if not self.target.has_generator(name):
                    raise InvalidTransition(
                        f"no image given for coordinate {name!r} and the target "
                        f"chart has no generator of that name"
                    )
                img = SuperFunction.generator(self.target, name)
            if img.chart != self.target:
                raise ChartMismatch(f"image of {name!r} does not live on the target chart")
            even = name in self.source._even_index  # type: ignore[attr-defined]
            if even and not img.is_even():
                raise ParityViolation(f"image of even coordinate {name!r} must be even")
            if not even and not (img.is_zero() or img.is_odd()):
                raise ParityViolation(f"image of odd coordinate {name!r} must be odd")
            fixed[name] = img
        extra = set(self.images) - set(fixed)
        if extra:
            raise InvalidTransition(
                f"images given for names that are not source coordinates: {sorted(extra)}"
            )
        object.__setattr__(self, "images", fixed)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def identity(cls, chart: Chart) -> "Transition":
        return cls(chart, chart, {})

    @classmethod
    def from_images(
        cls, source: Chart, target: Chart, images: Mapping[str, SuperFunction]
    ) -> "Transition":
        return cls(source, target, dict(images))

    @classmethod
    def scaling(
        cls, source: Chart, target: Chart, factors: Sequence[ScalarLike]
    ) -> "Transition":
        """Diagonal rescaling ``x^i -> c_i x'^i``, ``th_i -> th'_i / c_i``."""
        n = len(source.even_coords)
        if len(factors) != n:
            raise InvalidTransition("need one factor per even coordinate")
        images: dict[str, SuperFunction] = {}
        for i, (x, th) in enumerate(zip(source.even_coords, source.odd_coords)):
            c = SuperFunction.from_scalar(target, factors[i])
            if c.body().is_zero():
                raise InvalidTransition("scaling factors must be invertible")
            images[x] = c * SuperFunction.generator(target, target.even_coords[i])
            images[th] = c.invert() * SuperFunction.generator(
                target, target.odd_coords[i]
            )
        return cls(source, target, images)

    @classmethod
    def point(
        cls, source: Chart, target: Chart, phi: Sequence[SuperFunction]
    ) -> "Transition":
        """The cotangent lift of a base map ``x^i = phi^i(x')``.

        Odd coordinates transform contragradiently,
        ``th_j = sum_k (J^{-1})_{kj} th'_k`` with ``J_ik = d phi^i / dx'^k``,
        which preserves the canonical bracket.
        """
        n = len(source.even_coords)
        if len(phi) != n:
            raise InvalidTransition("need one image per even coordinate")
        for f in phi:
            if f.chart != target:
                raise ChartMismatch("base map components must live on the target chart")
            if f.odd_degree() or not f.is_even():
                raise InvalidTransition("base map components must be functions of x only")
        jac = [
            [phi[i].partial_even(xk) for xk in target.even_coords]
            for i in range(n)
        ]
        try:
            jac_inv = _inv_even(jac, target)
        except NonInvertibleBody:
            raise InvalidTransition("base map has a degenerate Jacobian") from None
        images: dict[str, SuperFunction] = {}
        for i, x in enumerate(source.even_coords):
            images[x] = phi[i]
        for j, th in enumerate(source.odd_coords):
            acc = SuperFunction.zero(target)
            for k, thk in enumerate(target.odd_coords):
                acc = acc + jac_inv[k][j] * SuperFunction.generator(target, thk)
            images[th] = acc
        return cls(source, target, images)

    @classmethod
    def shift_one_form(
        cls, source: Chart, target: Chart, alpha: Sequence[SuperFunction]
    ) -> "Transition":
        """The shift ``x^i -> x'^i``, ``th_j -> th'_j + alpha_j(x')``.

        Requires the odd-valued coefficients to form a closed one-form
        (``d alpha_i / dx^j`` symmetric), which makes the shift canonical.
        """
        n = len(source.even_coords)
        if len(alpha) != n:
            raise InvalidTransition("need one shift component per odd coordinate")
        for a in alpha:
            if a.chart != target:
                raise ChartMismatch("shift components must live on the target chart")
            if not (a.is_zero() or a.is_odd()):
                raise ParityViolation("shift components must be odd")
            for th in target.odd_coords:
                if a.depends_on_odd(target.odd_index(th)):
                    raise InvalidTransition(
                        "shift components must not involve the odd coordinates"
                    )
        for i in range(n):
            for j in range(i + 1, n):
                di = alpha[j].partial_even(target.even_coords[i])
                dj = alpha[i].partial_even(target.even_coords[j])
                if di != dj:
                    raise NotClosed(
                        f"shift one-form is not closed: d_{i + 1} alpha_{j + 1} "
                        f"!= d_{j + 1} alpha_{i + 1}"
                    )
        images: dict[str, SuperFunction] = {}
        for j, th in enumerate(source.odd_coords):
            images[th] = SuperFunction.generator(target, target.odd_coords[j]) + alpha[j]
        return cls(source, target, images)

    # -- actions -----------------------------------------------------------------

    def apply(self, f: SuperFunction) -> SuperFunction:
        """Pull a source-chart function through the substitution."""
        if f.chart != self.source:
            raise ChartMismatch("function does not live on the transition's source chart")
        return f.substitute(self.images, self.target)

    def compose(self, then: "Transition") -> "Transition":
        """First this transition, then ``then`` (whose source is our target)."""
        if then.source != self.target:
            raise ChartMismatch("compose requires matching intermediate charts")
        images = {name: then.apply(img) for name, img in self.images.items()}
        return Transition(self.source, then.target, images)


def jacobian(transition: Transition) -> Matrix:
    """Left-derivative Jacobian: rows = source coords, columns = target coords."""
    src = transition.source
    tgt = transition.target
    rows = src.even_coords + src.odd_coords
    cols = tgt.even_coords + tgt.odd_coords
    return [
        [transition.images[r].derivative(c) for c in cols]
        for r in rows
    ]


def berezinian(transition: Transition) -> SuperFunction:
    """The Berezinian of the transition's Jacobian (a target-chart function)."""
    tgt = transition.target
    n_even = len(transition.source.even_coords)
    jac = jacobian(transition)
    a = [row[:n_even] for row in jac[:n_even]]
    b = [row[n_even:] for row in jac[:n_even]]
    c = [row[:n_even] for row in jac[n_even:]]
    d = [row[n_even:] for row in jac[n_even:]]
    try:
        d_inv = _inv_even(d, tgt)
        det_d_inv = _det_even(d, tgt).invert()
    except NonInvertibleBody:
        raise InvalidTransition(
            "odd-odd block of the Jacobian is not invertible"
        ) from None
    schur = _mat_sub(a, _mat_mul(_mat_mul(b, d_inv), c)) if n_even else []
    return _det_even(schur, tgt) * det_d_inv


def sqrt_berezinian(transition: Transition) -> SuperFunction:
    """Exact square root of the Berezinian (raises if none exists)."""
    return berezinian(transition).sqrt_even()


def symplectomorphism_defects(transition: Transition) -> list[SuperFunction]:
    """Bracket defects of all coordinate pairs (all zero iff canonical).

    Checks ``{z^A . T, z^B . T}' = {z^A, z^B} . T`` on the generators, which
    by the Leibniz rule extends to all functions.
    """
    src = transition.source
    defects: list[SuperFunction] = []
    coords = list(src.even_coords) + list(src.odd_coords)
    imgs = transition.images
    n = len(src.even_coords)
    for i, zi in enumerate(coords):
        for j, zj in enumerate(coords):
            if j < i:
                continue
            got = odd_poisson_bracket(imgs[zi], imgs[zj])
            if j == i + n and i < n:  # conjugate pair (x^i, th_i)
                got = got - SuperFunction.one(transition.target)
            if not got.is_zero():
                defects.append(got)
    return defects


def is_symplectomorphism(transition: Transition) -> bool:
    """True iff the transition preserves the canonical odd bracket."""
    return not symplectomorphism_defects(transition)


def bv_identity(transition: Transition) -> SuperFunction:
    """``Delta_0(sqrt(Ber))`` in the target chart — zero for canonical maps."""
    return delta0(sqrt_berezinian(transition))


def laplacian_conjugation_defect(
    transition: Transition, f: SuperFunction
) -> SuperFunction:
    """Defect of the coordinate-Laplacian transformation law.

    For a canonical transition with Berezinian ``B`` and ``g = f . T``:
    ``(Delta_0 f) . T = Delta_0 g + (1/2) {log B, g}``; the returned value
    is the difference of the two sides.
    """
    g = transition.apply(f)
    lhs = transition.apply(delta0(f))
    rhs = delta0(g) + log_derivative_bracket(berezinian(transition), g).scale(
        Fraction(1, 2)
    )
    return lhs - rhs


# -- densities -------------------------------------------------------------------------


@dataclass(frozen=True)
class Density:
    """A density of rational weight: ``coefficient * D(x, th)^weight``.

    Weight one is a volume element, weight one-half a semidensity, weight
    zero a plain function.  Only integer and half-integer weights transform
    exactly in general (half-integers via the even square root of the
    Berezinian).
    """

    chart: Chart
    coefficient: SuperFunction
    weight: Fraction

    def __post_init__(self) -> None:
        if self.coefficient.chart != self.chart:
            raise ChartMismatch("density coefficient must live on the stated chart")
        object.__setattr__(self, "weight", Fraction(self.weight))

    @classmethod
    def semidensity(cls, coefficient: SuperFunction) -> "Density":
        return cls(coefficient.chart, coefficient, Fraction(1, 2))

    @classmethod
    def volume(cls, coefficient: SuperFunction) -> "Density":
        return cls(coefficient.chart, coefficient, Fraction(1))

    def scale(self, factor) -> "Density":
        return Density(self.chart, self.coefficient * factor, self.weight)

    def __add__(self, other: "Density") -> "Density":
        if not isinstance(other, Density):
            return NotImplemented
        if other.chart != self.chart or other.weight != self.weight:
            raise ChartMismatch("can only add densities of equal chart and weight")
        return Density(self.chart, self.coefficient + other.coefficient, self.weight)

    def __sub__(self, other: "Density") -> "Density":
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Density):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.weight == other.weight
            and self.coefficient == other.coefficient
        )


def transform_density(density: Density, transition: Transition) -> Density:
    """Push a density through a transition: substitution times ``Ber^weight``."""
    if density.chart != transition.source:
        raise ChartMismatch("density does not live on the transition's source chart")
    moved = transition.apply(density.coefficient)
    w = density.weight
    if w == 0:
        factor = SuperFunction.one(transition.target)
    elif w.denominator == 1:
        factor = berezinian(transition) ** w.numerator
    elif w.denominator == 2:
        factor = sqrt_berezinian(transition) ** w.numerator
    else:
        raise ValueError("only integer and half-integer density weights transform")
    return Density(transition.target, moved * factor, w)


def canonical_delta(density: Density) -> Density:
    """The odd Laplacian on semidensities: ``Delta_0`` on the coefficient."""
    if density.weight != Fraction(1, 2):
        raise ValueError("the canonical Laplacian acts on semidensities (weight 1/2)")
    return Density(density.chart, delta0(density.coefficient), density.weight)


def delta_q(q: SuperFunction, density: Density) -> Density:
    """First-order operator attached to a Hamiltonian on semidensities.

    ``delta_q(s) = (Delta_0 q) s - {q, s}`` on coefficients; for odd ``q``
    it commutes with the canonical Laplacian.
    """
    if density.weight != Fraction(1, 2):
        raise ValueError("delta_q acts on semidensities (weight 1/2)")
    s = density.coefficient
    coeff = delta0(q) * s - odd_poisson_bracket(q, s)
    return Density(density.chart, coeff, density.weight)


def lie_derivative_density(f: SuperFunction, density: Density) -> Density:
    """Lie derivative of a semidensity along the Hamiltonian field of ``f``.

    Defined as the commutator ``[Delta, f]`` acting on semidensities; on
    coefficients ``(Delta_0 f) s + (-1)^{p(f)} {f, s}``, extended to mixed
    parity by linearity.
    """
    if density.weight != Fraction(1, 2):
        raise ValueError("the Lie derivative here acts on semidensities (weight 1/2)")
    s = density.coefficient
    out = SuperFunction.zero(density.chart)
    for part in (f.even_part(), f.odd_part()):
        if part.is_zero():
            continue
        sign = -1 if (part.parity() or 0) else 1
        out = out + delta0(part) * s + odd_poisson_bracket(part, s).scale(sign)
    return Density(density.chart, out, density.weight)


def lie_commutator_defect(f: SuperFunction, density: Density) -> Density:
    """Difference between the Lie derivative and the commutator with ``Delta``.

    For homogeneous ``f`` the Lie derivative equals
    ``Delta(f s) - (-1)^{p(f)} f Delta(s)``; the returned density is the
    difference of the two computations (zero when the definitions agree).
    """
    p = f.parity_or_raise("commutator input")
    delta_fs = canonical_delta(Density.semidensity(f * density.coefficient))
    f_delta_s = Density.semidensity(f * canonical_delta(density).coefficient)
    commutator = delta_fs - f_delta_s if p == 0 else delta_fs + f_delta_s
    return lie_derivative_density(f, density) - commutator


# -- flows -----------------------------------------------------------------------------


def exponentiate_hamiltonian(
    q: SuperFunction,
    time: SuperFunction | ScalarLike,
    *,
    max_steps: int = 50,
) -> Transition:
    """The time-``t`` flow of the Hamiltonian derivation of ``q``.

    Images are the exponential series ``sum_k (t^k / k!) D_q^k(z)``.  The
    combined generator must be odd (``p(t) + p(q) = 1``) so the flow is a
    parity-preserving coordinate change; the series must terminate within
    ``max_steps`` applications (nilpotency), else
    :class:`~oddsymplectic.errors.NonTerminatingFlow` is raised.
    """
    chart = q.chart
    if not isinstance(time, SuperFunction):
        time = SuperFunction.from_scalar(chart, time)
    elif time.chart != chart:
        raise ChartMismatch("flow time must live on the Hamiltonian's chart")
    for name in chart.even_coords + chart.odd_coords:
        if not time.derivative(name).is_zero():
            raise ParityViolation("flow time must be a constant on the chart")
    pq = q.parity_or_raise("flow Hamiltonian")
    pt = time.parity_or_raise("flow time")
    if (pq + pt) & 1 != 1:
        raise ParityViolation(
            "the generator t*q of a flow must be odd (p(t) + p(q) = 1)"
        )
    images: dict[str, SuperFunction] = {}
    for name in chart.even_coords + chart.odd_coords:
        term = SuperFunction.generator(chart, name)
        total = term
        t_power = SuperFunction.one(chart)
        factorial = 1
        for k in range(1, max_steps + 1):
            term = odd_poisson_bracket(q, term)
            if term.is_zero():
                break
            t_power = t_power * time
            if t_power.is_zero():
                break
            factorial *= k
            total = total + (t_power * term).scale(Fraction(1, factorial))
        else:
            raise NonTerminatingFlow(
                f"flow series for {name!r} did not terminate in {max_steps} steps"
            )
        images[name] = total
    return Transition(chart, chart, images)


# -- normality ----------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalityReport:
    """Which candidate transitions normalise a volume element."""

    normalising: tuple[int, ...]
    delta_on_root: SuperFunction
    root_is_closed: bool

    @property
    def found(self) -> bool:
        return bool(self.normalising)


def is_normal(
    density: Density, candidates: Iterable[Transition] = ()
) -> NormalityReport:
    """Report candidates sending a weight-one density to the constant one.

    Also evaluates the necessary condition ``Delta_0(sqrt rho) = 0`` (the
    square-root semidensity must be closed for a normalising system of
    coordinates to exist).
    """
    if density.weight != 1:
        raise ValueError("normality is a property of volume densities (weight 1)")
    root = density.coefficient.sqrt_even()
    closed = delta0(root)
    winners: list[int] = []
    for index, transition in enumerate(candidates):
        moved = transform_density(density, transition)
        if moved.coefficient == SuperFunction.one(transition.target):
            winners.append(index)
    return NormalityReport(
        normalising=tuple(winners),
        delta_on_root=closed,
        root_is_closed=closed.is_zero(),
    )
