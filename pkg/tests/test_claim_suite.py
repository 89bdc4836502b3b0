"""
End-to-end claim checks on the classical Fourier knots.

These run the whole pipeline and are the slowest tests in the suite.
"""

import pytest

from fourier_knots.claim_suite import CLAIM_NAMES, ClaimResult, format_table, run_claim_suite


def _one(*names, **kwargs):
    results = run_claim_suite(only=list(names), **kwargs)
    return {r.claim: r for r in results}


class TestClaims:

    @pytest.mark.parametrize("claim", [
        "trefoil",
        "figure-eight",
        "fibonacci F(3) = trefoil",
        "fibonacci F(6) robustness",
        "torus expansion",
        "lissajous arf = 0",
        "mirror",
        "projection invariance",
        "approximation",
    ])
    def test_claim_passes(self, claim):
        result = _one(claim)[claim]
        assert result.passed, f"{result.expected!r} != {result.got!r}"

    def test_cross_checks_over_collected_diagrams(self):
        results = _one("trefoil", "figure-eight", "skein relation", "murasugi")
        assert list(results) == ["trefoil", "figure-eight", "skein relation", "murasugi"]
        assert all(r.passed for r in results.values())

    def test_cross_checks_need_diagrams(self):
        results = _one("skein relation", "murasugi")
        assert not results["skein relation"].passed
        assert not results["murasugi"].passed

    def test_wrong_sign_rule_is_caught(self):
        results = _one("mirror", sign_rule=lambda over, under: 1)
        assert not results["mirror"].passed

    def test_every_claim_is_covered(self):
        covered = {
            "trefoil", "figure-eight", "fibonacci F(3) = trefoil", "fibonacci F(6) robustness",
            "torus expansion", "lissajous arf = 0", "mirror", "projection invariance",
            "approximation", "skein relation", "murasugi",
        }
        assert set(CLAIM_NAMES) == covered

    def test_full_run_passes(self):
        results = run_claim_suite()
        assert [r.claim for r in results] == list(CLAIM_NAMES)
        failed = [f"{r.claim}: {r.got}" for r in results if not r.passed]
        assert not failed


class TestTable:

    def test_names_are_unique(self):
        assert len(set(CLAIM_NAMES)) == len(CLAIM_NAMES)

    def test_format(self):
        results = [
            ClaimResult("trefoil", "a", "a", True),
            ClaimResult("mirror", "writhe negated", "writhe 3 / 3", False),
        ]
        lines = format_table(results).splitlines()
        assert lines[0].split() == ["claim", "expected", "got", "status"]
        assert lines[2].endswith("PASS")
        assert lines[3].endswith("FAIL")
        assert lines[-1] == "1/2 claims passed"

    def test_empty(self):
        assert format_table([]).splitlines()[-1] == "0/0 claims passed"
