"""Suite reports: determinism, coverage, and failure detection under mutation."""

import pytest

from oddsymplectic import brackets, charts, suites


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        suites.run_suite("nonsense")
    with pytest.raises(ValueError):
        suites.run_suite("axioms", count=0)


def test_every_named_suite_passes():
    for name in ("axioms", "laplacian", "bv", "fourier", "master"):
        report = suites.run_suite(name, n=2, seed=5, count=4)
        assert report.passed, report.lines()
        assert report.items
        for item in report.items:
            assert item.checked >= 1


def test_all_concatenates_the_named_suites():
    combined = suites.run_suite("all", n=2, seed=5, count=3)
    separate = [
        item
        for name in suites.SUITE_NAMES[:-1]
        for item in suites.run_suite(name, n=2, seed=5, count=3).items
    ]
    assert list(combined.items) == separate
    assert combined.passed


def test_reports_are_deterministic_per_seed():
    first = suites.run_suite("laplacian", n=2, seed=9, count=4)
    second = suites.run_suite("laplacian", n=2, seed=9, count=4)
    assert first == second


def test_report_lines_and_dict_shape():
    report = suites.run_suite("axioms", n=1, seed=0, count=3)
    lines = report.lines()
    assert lines[0].startswith("suite axioms")
    assert lines[-1] == "all identities hold"
    assert all(line.startswith("[PASS]") for line in lines[1:-1])
    data = report.to_dict()
    assert data["suite"] == "axioms"
    assert data["passed"] is True
    assert {item["tag"] for item in data["items"]} == {
        "bracket-parity-shift",
        "bracket-shifted-antisymmetry",
        "bracket-left-leibniz",
        "bracket-shifted-jacobi",
    }


def test_bv_suite_includes_the_scaling_example():
    report = suites.run_suite("bv", n=1, seed=2, count=3)
    tags = [item.tag for item in report.items]
    assert "berezinian-diagonal-scaling-example" in tags
    assert report.passed


def test_mutated_bracket_is_caught_with_the_violating_tag(monkeypatch):
    original = brackets.odd_poisson_bracket

    def deformed(f, g):
        return original(f, g) + f * g

    monkeypatch.setattr(brackets, "odd_poisson_bracket", deformed)
    report = suites.run_suite("axioms", n=2, seed=5, count=4)
    assert not report.passed
    failing = {item.tag for item in report.items if not item.passed}
    assert "bracket-parity-shift" in failing
    assert any("FAIL" in line for line in report.lines())
    assert report.lines()[-1] == "FAILURES detected"


def test_mutated_berezinian_root_is_caught(monkeypatch):
    original = charts.sqrt_berezinian

    def deformed(transition):
        root = original(transition)
        from oddsymplectic.superalgebra import SuperFunction

        bump = SuperFunction.generator(
            root.chart, root.chart.even_coords[0]
        ) * SuperFunction.generator(root.chart, root.chart.odd_coords[0])
        return root + bump

    monkeypatch.setattr(charts, "sqrt_berezinian", deformed)
    report = suites.run_suite("bv", n=2, seed=5, count=4)
    assert not report.passed
    failing = {item.tag for item in report.items if not item.passed}
    assert "square-root-berezinian-is-closed" in failing
