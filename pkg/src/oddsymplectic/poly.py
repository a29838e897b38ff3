"""Sparse multivariate polynomials over the Gaussian rationals.

Terms are stored as ``{exponent_tuple: coefficient}`` with no zero
coefficients; the monomial order used for leading terms, exact division and
square roots is lexicographic on the exponent tuples (Python tuple order).
These polynomials are the numerators and denominators of the package's
scalar coefficients, so everything here is exact.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .gaussian import GaussianRational, QLike, to_gaussian

__all__ = ["Polynomial"]

_Exps = tuple[int, ...]

_IntTerms = dict[_Exps, int]


class _HeuristicFailed(Exception):
    """The evaluation-based gcd gave up; the caller falls back to remainders."""


def _int_content(terms: _IntTerms) -> int:
    """Positive gcd of the integer coefficients (0 for the empty dict)."""
    c = 0
    for v in terms.values():
        c = math.gcd(c, v)
        if c == 1:
            break
    return c


def _int_divide_exact(num: _IntTerms, div: _IntTerms) -> _IntTerms | None:
    """Exact quotient of integer term dicts in lex order, or ``None``."""
    if not num:
        return {}
    lt_d = max(div)
    lc_d = div[lt_d]
    quotient: _IntTerms = {}
    rem = dict(num)
    while rem:
        lt_r = max(rem)
        diff = tuple(a - b for a, b in zip(lt_r, lt_d))
        if any(d < 0 for d in diff):
            return None
        q, r = divmod(rem[lt_r], lc_d)
        if r:
            return None
        quotient[diff] = q
        for exps, v in div.items():
            shifted = tuple(a + b for a, b in zip(exps, diff))
            acc = rem.get(shifted, 0) - v * q
            if acc:
                rem[shifted] = acc
            else:
                rem.pop(shifted, None)
    return quotient


def _int_eval(terms: _IntTerms, index: int, xi: int) -> _IntTerms:
    """Substitute the integer ``xi`` for one variable."""
    out: _IntTerms = {}
    for exps, v in terms.items():
        key = exps[:index] + (0,) + exps[index + 1 :]
        out[key] = out.get(key, 0) + v * xi ** exps[index]
    return {e: v for e, v in out.items() if v}


def _int_interpolate(h: _IntTerms, index: int, xi: int) -> _IntTerms:
    """Read balanced base-``xi`` digits of ``h`` as powers of one variable."""
    out: _IntTerms = {}
    power = 0
    half = xi // 2
    while h:
        carry: _IntTerms = {}
        for exps, v in h.items():
            r = v % xi
            if r > half:
                r -= xi
            if r:
                out[exps[:index] + (power,) + exps[index + 1 :]] = r
            w = (v - r) // xi
            if w:
                carry[exps] = w
        h = carry
        power += 1
    return out


def _int_gcd_heuristic(f: _IntTerms, g: _IntTerms, nvars: int) -> _IntTerms:
    """Gcd of integer term dicts by evaluation, integer gcd, and digit lifting.

    Every candidate is verified by exact division before it is returned, so a
    successful result is always a genuine common divisor of maximal degree;
    unlucky evaluation points only cause retries and, after six of them,
    :class:`_HeuristicFailed`.
    """
    cf = _int_content(f)
    cg = _int_content(g)
    c = math.gcd(cf, cg)
    f = {e: v // cf for e, v in f.items()}
    g = {e: v // cg for e, v in g.items()}
    live: set[int] = set()
    for terms in (f, g):
        for exps in terms:
            for i, e in enumerate(exps):
                if e:
                    live.add(i)
    if not live:
        return {(0,) * nvars: c}
    index = max(live)
    nf = max(abs(v) for v in f.values())
    ng = max(abs(v) for v in g.values())
    xi = 2 * min(nf, ng) + 29
    for _ in range(6):
        if xi.bit_length() > 4000:
            raise _HeuristicFailed
        ff = _int_eval(f, index, xi)
        gg = _int_eval(g, index, xi)
        if ff and gg:
            h = _int_gcd_heuristic(ff, gg, nvars)
            cand = _int_interpolate(h, index, xi)
            cc = _int_content(cand)
            cand = {e: v // cc for e, v in cand.items()}
            if (
                _int_divide_exact(f, cand) is not None
                and _int_divide_exact(g, cand) is not None
            ):
                return {e: c * v for e, v in cand.items()}
        xi = 73794 * xi * math.isqrt(math.isqrt(xi)) // 27011
    raise _HeuristicFailed


class Polynomial:
    """A polynomial in ``nvars`` commuting variables over Q(i)."""

    __slots__ = ("nvars", "terms")

    nvars: int
    terms: dict[_Exps, GaussianRational]

    def __init__(self, nvars: int, terms: dict[_Exps, GaussianRational] | None = None) -> None:
        self.nvars = nvars
        self.terms = {} if terms is None else {e: c for e, c in terms.items() if c}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, value: QLike, nvars: int) -> "Polynomial":
        c = to_gaussian(value)
        if not c:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: to_gaussian(1)})

    @classmethod
    def monomial(cls, exps: _Exps, coeff: QLike, nvars: int) -> "Polynomial":
        c = to_gaussian(coeff)
        if not c:
            return cls(nvars)
        return cls(nvars, {tuple(exps): c})

    # -- predicates and views --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        """The coefficient of the empty monomial (the value at the origin)."""
        return self.terms.get((0,) * self.nvars, to_gaussian(0))

    def leading(self) -> tuple[_Exps, GaussianRational]:
        """Leading (lex-greatest) term; raises ``ValueError`` on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms)
        return exps, self.terms[exps]

    def degree_in(self, index: int) -> int:
        """Degree in one variable; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def variables_present(self) -> set[int]:
        present: set[int] = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    present.add(i)
        return present

    def __iter__(self) -> Iterator[tuple[_Exps, GaussianRational]]:
        return iter(self.terms.items())

    # -- ring operations -------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError("polynomials live over different variable sets")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps)
            if acc is None:
                terms[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    terms[exps] = acc
                else:
                    del terms[exps]
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial(self.nvars)
        terms: dict[_Exps, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                acc = terms.get(exps)
                if acc is None:
                    terms[exps] = prod
                else:
                    acc = acc + prod
                    if acc:
                        terms[exps] = acc
                    else:
                        del terms[exps]
        return Polynomial(self.nvars, terms)

    def scale(self, factor: QLike) -> "Polynomial":
        c = to_gaussian(factor)
        if not c:
            return Polynomial(self.nvars)
        return Polynomial(self.nvars, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self.terms!r})"

    # -- calculus ---------------------------------------------------------------

    def partial(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index``."""
        terms: dict[_Exps, GaussianRational] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if not e:
                continue
            new = exps[:index] + (e - 1,) + exps[index + 1 :]
            c = coeff * e
            acc = terms.get(new)
            terms[new] = acc + c if acc is not None else c
        return Polynomial(self.nvars, {e: c for e, c in terms.items() if c})

    def set_vars_to_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Evaluate the listed variables at zero."""
        idx = set(indices)
        terms = {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)}
        return Polynomial(self.nvars, terms)

    def coefficients_in(self, index: int) -> dict[int, "Polynomial"]:
        """Split by the power of one variable: ``{k: coefficient of v^k}``.

        The returned polynomials have the chosen variable's exponent zeroed.
        """
        split: dict[int, dict[_Exps, GaussianRational]] = {}
        for exps, coeff in self.terms.items():
            k = exps[index]
            reduced = exps[:index] + (0,) + exps[index + 1 :]
            split.setdefault(k, {})[reduced] = coeff
        return {k: Polynomial(self.nvars, t) for k, t in split.items()}

    # -- division, gcd, square root ----------------------------------------------

    def divide_exact(self, divisor: "Polynomial") -> "Polynomial | None":
        """Exact quotient ``self / divisor`` or ``None`` if not divisible."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return Polynomial(self.nvars)
        lt_d, lc_d = divisor.leading()
        quotient: dict[_Exps, GaussianRational] = {}
        remainder = self
        while not remainder.is_zero():
            lt_r, lc_r = remainder.leading()
            diff = tuple(a - b for a, b in zip(lt_r, lt_d))
            if any(d < 0 for d in diff):
                return None
            c = lc_r / lc_d
            quotient[diff] = quotient.get(diff, to_gaussian(0)) + c
            remainder = remainder - divisor * Polynomial.monomial(diff, c, self.nvars)
        return Polynomial(self.nvars, quotient)

    def monic(self) -> "Polynomial":
        """Scale so the lex-leading coefficient is one (zero stays zero)."""
        if not self.terms:
            return self
        _, lc = self.leading()
        if lc == 1:
            return self
        inv = lc.inverse()
        return Polynomial(self.nvars, {e: c * inv for e, c in self.terms.items()})

    def _univariate_view(self, index: int) -> dict[int, "Polynomial"]:
        return self.coefficients_in(index)

    @staticmethod
    def _content_primitive(p: "Polynomial", index: int) -> tuple["Polynomial", "Polynomial"]:
        """Content (gcd of v^k-coefficients) and primitive part along one variable."""
        coeffs = list(p._univariate_view(index).values())
        content = coeffs[0]
        for c in coeffs[1:]:
            content = Polynomial.gcd(content, c)
            if content.is_constant():
                break
        content = content.monic()
        primitive = p.divide_exact(content)
        assert primitive is not None
        return content, primitive

    @staticmethod
    def _pseudo_remainder(a: "Polynomial", b: "Polynomial", index: int) -> "Polynomial":
        """A polynomial proportional to the remainder of ``a`` by ``b`` in variable ``index``."""
        deg_b = b.degree_in(index)
        lc_b = b._univariate_view(index)[deg_b]
        remainder = a
        nvars = a.nvars
        while not remainder.is_zero():
            deg_r = remainder.degree_in(index)
            if deg_r < deg_b:
                break
            lc_r = remainder._univariate_view(index)[deg_r]
            shift = Polynomial.monomial(
                tuple(deg_r - deg_b if i == index else 0 for i in range(nvars)), 1, nvars
            )
            remainder = remainder * lc_b - b * lc_r * shift
        return remainder

    def _monomial_content(self) -> _Exps:
        """Elementwise minimum of the exponent tuples (the shared monomial)."""
        mins: list[int] | None = None
        for exps in self.terms:
            if mins is None:
                mins = list(exps)
            else:
                for i, e in enumerate(exps):
                    if e < mins[i]:
                        mins[i] = e
            if mins is not None and not any(mins):
                break
        assert mins is not None
        return tuple(mins)

    def _shift_down(self, mins: _Exps) -> "Polynomial":
        """Divide by the monomial with exponents ``mins`` (must be a factor)."""
        return Polynomial(
            self.nvars,
            {tuple(e - m for e, m in zip(exps, mins)): c for exps, c in self.terms.items()},
        )

    @staticmethod
    def _gcd_heuristic(a: "Polynomial", b: "Polynomial") -> "Polynomial | None":
        """Heuristic gcd over the rationals, or ``None`` when inapplicable.

        Clears denominators to integer coefficients and runs the
        evaluate/lift/verify strategy; polynomials with a genuinely imaginary
        coefficient are left to the remainder-sequence path.
        """
        cleared: list[_IntTerms] = []
        for p in (a, b):
            lcm = 1
            for coeff in p.terms.values():
                if coeff.im:
                    return None
                den = coeff.re.denominator
                lcm = lcm * (den // math.gcd(lcm, den))
            cleared.append({e: int(coeff.re * lcm) for e, coeff in p.terms.items()})
        try:
            h = _int_gcd_heuristic(cleared[0], cleared[1], a.nvars)
        except _HeuristicFailed:
            return None
        return Polynomial(a.nvars, {e: to_gaussian(v) for e, v in h.items()})

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor.

        A shared monomial factor comes out first; the rest is found by the
        evaluation heuristic when the coefficients are rational, with a
        primitive remainder sequence as the general fallback.
        """
        a._check(b)
        if a.is_zero():
            return b.monic()
        if b.is_zero():
            return a.monic()
        mins = tuple(
            min(x, y) for x, y in zip(a._monomial_content(), b._monomial_content())
        )
        if any(mins):
            core = Polynomial.gcd(a._shift_down(mins), b._shift_down(mins))
            return (core * Polynomial.monomial(mins, 1, a.nvars)).monic()
        if len(a.terms) == 1 or len(b.terms) == 1:
            return Polynomial.one(a.nvars)
        shared = a.variables_present() | b.variables_present()
        if not shared:
            return Polynomial.one(a.nvars)
        heuristic = Polynomial._gcd_heuristic(a, b)
        if heuristic is not None:
            return heuristic.monic()
        return Polynomial._gcd_prs(a, b)

    @staticmethod
    def _gcd_prs(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic gcd by a primitive pseudo-remainder sequence."""
        shared = a.variables_present() | b.variables_present()
        index = max(shared)
        content_a, prim_a = Polynomial._content_primitive(a, index)
        content_b, prim_b = Polynomial._content_primitive(b, index)
        content = Polynomial.gcd(content_a, content_b)
        if prim_a.degree_in(index) < prim_b.degree_in(index):
            prim_a, prim_b = prim_b, prim_a
        while True:
            if prim_b.is_zero():
                part = prim_a
                break
            if prim_b.degree_in(index) == 0:
                part = Polynomial.one(a.nvars)
                break
            remainder = Polynomial._pseudo_remainder(prim_a, prim_b, index)
            if remainder.is_zero():
                part = prim_b
                break
            if remainder.degree_in(index) == 0:
                part = Polynomial.one(a.nvars)
                break
            _, reduced = Polynomial._content_primitive(remainder, index)
            prim_a, prim_b = prim_b, reduced
        return (content * part).monic()

    def sqrt(self) -> "Polynomial | None":
        """Exact square root of a perfect square, or ``None``.

        Reconstructs the root term by term in lex order: if ``p = r^2`` with
        ``r = t0 + t1 + ...`` (lex-decreasing), then ``lt(p) = t0^2`` and each
        later term is ``lt(remainder) / (2 t0)``.
        """
        if self.is_zero():
            return Polynomial(self.nvars)
        lt, lc = self.leading()
        if any(e % 2 for e in lt):
            return None
        root_lc = lc.sqrt()
        if root_lc is None:
            return None
        half_exps = tuple(e // 2 for e in lt)
        root = Polynomial.monomial(half_exps, root_lc, self.nvars)
        remainder = self - root * root
        double_lc = root_lc * 2
        previous: _Exps | None = None
        while not remainder.is_zero():
            lt_r, lc_r = remainder.leading()
            diff = tuple(a - b for a, b in zip(lt_r, half_exps))
            if any(d < 0 for d in diff):
                return None
            if previous is not None and diff >= previous:
                return None
            previous = diff
            term = Polynomial.monomial(diff, lc_r / double_lc, self.nvars)
            remainder = remainder - root * term * Polynomial.constant(2, self.nvars) - term * term
            root = root + term
        return root
