"""Expression text, canonical printing, and JSON serialization.

The textual grammar shared by the library and the command line:

* identifiers name chart generators (``x1``, ``th1``, ``xi1``, ``eps1``,
  ``hbar``, ...) and the imaginary unit ``I``;
* ``+ - * / ^`` with the usual precedence, unary signs, and parentheses;
  exponents are integer literals (possibly signed);
* ``D(f, g)`` takes the derivative of ``f`` along the generator ``g``
  (left derivative along odd generators);
* literals are exact integers; rationals are written as quotients
  (``2/3``).  Decimal points are rejected.

``format_superfunction`` emits a canonical form — terms ordered by odd
monomial, polynomial coefficients with lexicographically-leading monomials
first — and ``parse_expression`` inverts it exactly on every value the
library can produce.

JSON serialization represents a function as ``{"chart": ..., "terms":
[{"monomial": [...], "num": ..., "den": ...}]}`` with numerator and
denominator in the textual grammar, and a transition as its two charts plus
an image expression per generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .charts import Transition
from .errors import ExpressionSyntaxError, UnknownGenerator
from .gaussian import GaussianRational
from .scalar import Scalar
from .superalgebra import Chart, SuperFunction

__all__ = [
    "parse_expression",
    "format_superfunction",
    "format_scalar",
    "chart_to_dict",
    "chart_from_dict",
    "superfunction_to_dict",
    "superfunction_from_dict",
    "transition_to_dict",
    "transition_from_dict",
]


# -- tokenizer ---------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "name" | "punct" | "end"
    text: str
    line: int
    column: int


_PUNCT = set("+-*/^(),")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, column = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            column = 1
            continue
        if ch in " \t\r":
            i += 1
            column += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, line, column))
            i += 1
            column += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            if i < len(text) and text[i] == ".":
                raise ExpressionSyntaxError(
                    "decimal literals are not supported (use exact quotients)",
                    line,
                    column + (i - start),
                )
            tokens.append(_Token("int", text[start:i], line, column))
            column += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("name", text[start:i], line, column))
            column += i - start
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", line, column)
    tokens.append(_Token("end", "", line, column))
    return tokens


# -- parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token], chart: Chart) -> None:
        self.tokens = tokens
        self.pos = 0
        self.chart = chart

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str) -> ExpressionSyntaxError:
        token = self.current
        return ExpressionSyntaxError(message, token.line, token.column)

    def expect_punct(self, text: str) -> None:
        token = self.current
        if token.kind != "punct" or token.text != text:
            raise self.fail(f"expected {text!r}")
        self.advance()

    def expression(self) -> SuperFunction:
        value = self.term()
        while self.current.kind == "punct" and self.current.text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> SuperFunction:
        value = self.factor()
        while self.current.kind == "punct" and self.current.text in "*/":
            op = self.advance().text
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> SuperFunction:
        if self.current.kind == "punct" and self.current.text in "+-":
            op = self.advance().text
            value = self.factor()
            return value if op == "+" else -value
        return self.power()

    def power(self) -> SuperFunction:
        base = self.atom()
        if self.current.kind == "punct" and self.current.text == "^":
            self.advance()
            sign = 1
            if self.current.kind == "punct" and self.current.text in "+-":
                if self.advance().text == "-":
                    sign = -1
            if self.current.kind != "int":
                raise self.fail("expected an integer exponent")
            exponent = sign * int(self.advance().text)
            return base**exponent
        return base

    def atom(self) -> SuperFunction:
        token = self.current
        if token.kind == "int":
            self.advance()
            return SuperFunction.from_scalar(self.chart, int(token.text))
        if token.kind == "punct" and token.text == "(":
            self.advance()
            value = self.expression()
            self.expect_punct(")")
            return value
        if token.kind == "name":
            if (
                token.text == "D"
                and self.tokens[self.pos + 1].kind == "punct"
                and self.tokens[self.pos + 1].text == "("
            ):
                return self.derivative_call()
            self.advance()
            if token.text == "I":
                return SuperFunction.from_scalar(self.chart, GaussianRational(0, 1))
            if not self.chart.has_generator(token.text):
                raise UnknownGenerator(
                    f"{token.text!r} is not a generator of chart"
                    f" {self.chart.name!r} (at column {token.column})"
                )
            return SuperFunction.generator(self.chart, token.text)
        if token.kind == "end":
            raise self.fail("unexpected end of input")
        raise self.fail(f"unexpected {token.text!r}")

    def derivative_call(self) -> SuperFunction:
        self.advance()  # D
        self.expect_punct("(")
        value = self.expression()
        self.expect_punct(",")
        name_token = self.current
        if name_token.kind != "name":
            raise self.fail("expected a generator name")
        self.advance()
        if not self.chart.has_generator(name_token.text):
            raise UnknownGenerator(
                f"{name_token.text!r} is not a generator of chart"
                f" {self.chart.name!r} (at column {name_token.column})"
            )
        self.expect_punct(")")
        return value.derivative(name_token.text)


def parse_expression(text: str, chart: Chart) -> SuperFunction:
    """Parse an expression in the shared grammar against a chart's generators."""
    parser = _Parser(_tokenize(text), chart)
    value = parser.expression()
    if parser.current.kind != "end":
        raise parser.fail("syntax error: unexpected trailing input")
    return value


# -- canonical printer ----------------------------------------------------------------


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _format_gaussian(value: GaussianRational) -> str:
    """A Gaussian rational as an expression (a sum when both parts appear)."""
    if not value.im:
        return _format_fraction(value.re)
    if value.im == 1:
        imaginary = "I"
    elif value.im == -1:
        imaginary = "-I"
    else:
        imaginary = f"{_format_fraction(value.im)}*I"
    if not value.re:
        return imaginary
    joiner = " - " if imaginary.startswith("-") else " + "
    return _format_fraction(value.re) + joiner + imaginary.lstrip("-")


def _is_sum(text: str) -> bool:
    """True when the text is a sum at paren depth zero (so it needs wrapping)."""
    depth = 0
    for position, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and position > 0 and ch in "+-":
            return True
    return False


def _format_poly_term(
    exps: tuple[int, ...], coeff: GaussianRational, names: tuple[str, ...]
) -> str:
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    coeff_text = _format_gaussian(coeff)
    if not factors:
        return coeff_text if not _is_sum(coeff_text) else f"({coeff_text})"
    if coeff_text == "1":
        return "*".join(factors)
    if coeff_text == "-1":
        return "-" + "*".join(factors)
    if _is_sum(coeff_text):
        coeff_text = f"({coeff_text})"
    return coeff_text + "*" + "*".join(factors)


def _join_terms(rendered: list[str]) -> str:
    out = rendered[0]
    for text in rendered[1:]:
        if text.startswith("-"):
            out += " - " + text[1:]
        else:
            out += " + " + text
    return out


def _format_polynomial(poly, names: tuple[str, ...]) -> str:
    if poly.is_zero():
        return "0"
    ordered = sorted(poly.terms.items(), key=lambda item: item[0], reverse=True)
    return _join_terms([_format_poly_term(e, c, names) for e, c in ordered])


def format_scalar(scalar: Scalar, names: tuple[str, ...]) -> str:
    """A rational coefficient in the shared grammar (canonical term order)."""
    num = _format_polynomial(scalar.num, names)
    if scalar.is_polynomial():
        return num
    den = _format_polynomial(scalar.den, names)
    return f"({num})/({den})"


def _even_names(chart: Chart) -> tuple[str, ...]:
    return tuple(chart.even_coords) + tuple(chart.params)


def _odd_names(chart: Chart) -> tuple[str, ...]:
    return (
        tuple(chart.odd_coords) + tuple(chart.fiber_odds) + tuple(chart.external_odds)
    )


def format_superfunction(f: SuperFunction) -> str:
    """Canonical text: odd monomials in mask order, coefficients canonical."""
    if f.is_zero():
        return "0"
    evens = _even_names(f.chart)
    odds = _odd_names(f.chart)
    rendered: list[str] = []
    for mask in sorted(f.terms):
        coeff = f.terms[mask]
        monomial = "*".join(odds[b] for b in range(len(odds)) if mask >> b & 1)
        if not monomial:
            rendered.append(format_scalar(coeff, evens))
            continue
        if coeff == 1:
            rendered.append(monomial)
            continue
        if coeff == -1:
            rendered.append("-" + monomial)
            continue
        text = format_scalar(coeff, evens)
        if _is_sum(text):
            text = f"({text})"
        rendered.append(text + "*" + monomial)
    return _join_terms(rendered)


# -- JSON serialization -----------------------------------------------------------------


def chart_to_dict(chart: Chart) -> dict[str, Any]:
    return {
        "name": chart.name,
        "evens": list(chart.even_coords),
        "odds": list(chart.odd_coords),
        "fibers": list(chart.fiber_odds),
        "externals": list(chart.external_odds),
        "params": list(chart.params),
    }


def chart_from_dict(data: Mapping[str, Any]) -> Chart:
    return Chart(
        name=str(data.get("name", "C")),
        even_coords=tuple(data.get("evens", ())),
        odd_coords=tuple(data.get("odds", ())),
        fiber_odds=tuple(data.get("fibers", ())),
        external_odds=tuple(data.get("externals", ())),
        params=tuple(data.get("params", ("hbar",))),
    )


def superfunction_to_dict(f: SuperFunction) -> dict[str, Any]:
    evens = _even_names(f.chart)
    odds = _odd_names(f.chart)
    terms = []
    for mask in sorted(f.terms):
        coeff = f.terms[mask]
        terms.append(
            {
                "monomial": [odds[b] for b in range(len(odds)) if mask >> b & 1],
                "num": _format_polynomial(coeff.num, evens),
                "den": _format_polynomial(coeff.den, evens),
            }
        )
    return {"chart": chart_to_dict(f.chart), "terms": terms}


def superfunction_from_dict(data: Mapping[str, Any]) -> SuperFunction:
    chart = chart_from_dict(data["chart"])
    total = SuperFunction.zero(chart)
    for item in data.get("terms", ()):
        value = parse_expression(str(item["num"]), chart)
        den = item.get("den", "1")
        if str(den) != "1":
            value = value / parse_expression(str(den), chart)
        for name in item.get("monomial", ()):
            if not chart.has_generator(name):
                raise UnknownGenerator(
                    f"{name!r} is not a generator of chart {chart.name!r}"
                )
            value = value * SuperFunction.generator(chart, name)
        total = total + value
    return total


def transition_to_dict(transition: Transition) -> dict[str, Any]:
    return {
        "source": chart_to_dict(transition.source),
        "target": chart_to_dict(transition.target),
        "images": {
            name: format_superfunction(image)
            for name, image in sorted(transition.images.items())
        },
    }


def transition_from_dict(data: Mapping[str, Any]) -> Transition:
    source = chart_from_dict(data["source"])
    target = chart_from_dict(data["target"])
    images = {
        str(name): parse_expression(str(text), target)
        for name, text in data.get("images", {}).items()
    }
    return Transition(source, target, images)
