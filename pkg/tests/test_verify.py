import json

import pytest

from glsbo.verify import (
    MD_HEADER,
    DegenerateRatioError,
    Failure,
    SuiteConfig,
    SuiteReport,
    UnknownSuiteError,
    ratio_of_ratios,
    reports_to_markdown,
    resolve_suite,
    run_suite,
    suite_names,
)

FAST = ["lemma-algebra", "cocycle", "convolution", "bs-identities", "normalizer-structure",
        "zero-sets", "residue-model", "ftilde", "irreducibility-and-integrability", "continuation"]


def strip_runtime(d):
    d = dict(d)
    d.pop("runtime_ms")
    return d


class TestConfig:
    @pytest.mark.parametrize("kwargs", [{"trials": 0}, {"tol": 0.0}, {"tol": -1e-3}, {"n": 0}])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            SuiteConfig("cocycle", **kwargs)

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuiteError):
            run_suite(SuiteConfig("no-such-suite"))

    def test_alias(self):
        assert resolve_suite("bernstein-sato") == "bs-identities"
        assert "bernstein-sato" not in suite_names()
        assert len(suite_names()) == 14


class TestRuns:
    @pytest.mark.parametrize("suite", FAST)
    def test_fast_suites_pass(self, suite):
        rep = run_suite(SuiteConfig(suite, n=2, trials=3, seed=5))
        assert rep.passed, rep.to_json()
        assert rep.checks > 0

    def test_deterministic(self):
        a = run_suite(SuiteConfig("convolution", trials=5, seed=11))
        b = run_suite(SuiteConfig("convolution", trials=5, seed=11))
        assert strip_runtime(a.to_dict()) == strip_runtime(b.to_dict())
        c = run_suite(SuiteConfig("convolution", trials=5, seed=12))
        assert a.max_rel_err != c.max_rel_err

    def test_prefix_of_trials_is_stable(self):
        # trial k draws from its own stream, so extending a run does not change earlier trials
        a = run_suite(SuiteConfig("convolution", trials=3, seed=4, tol=1e-30))
        b = run_suite(SuiteConfig("convolution", trials=6, seed=4, tol=1e-30))
        fa = [f.to_dict() for f in a.failures]
        fb = [f.to_dict() for f in b.failures if f.trial < 3]
        assert fa == fb

    def test_tight_tolerance_fails(self):
        rep = run_suite(SuiteConfig("convolution", trials=2, seed=0, tol=1e-30))
        assert not rep.passed and rep.failures[0].rel_err > 1e-30

    def test_spherical_n3_reports_failure(self):
        rep = run_suite(SuiteConfig("spherical", n=3, trials=1))
        assert not rep.passed and rep.failures[0].note


class TestReports:
    def test_json_keys(self):
        rep = run_suite(SuiteConfig("lemma-algebra", n=3, trials=2, seed=1))
        d = json.loads(rep.to_json())
        assert set(d) == {"suite", "n", "trials", "seed", "tol", "pass", "checks", "max_rel_err",
                          "failures", "runtime_ms"}
        assert d["pass"] is True and d["tol"] == 0.0

    def test_failure_serialization(self):
        f = Failure(0, {"x": 1}, 1 + 1j, None, float("inf"), "note")
        d = f.to_dict()
        assert d["lhs"] == "1+1i" and d["rhs"] is None and d["rel_err"] == "inf"
        json.dumps(d)

    def test_markdown(self):
        good = SuiteReport("cocycle", 2, 1, 0, 1e-10, checks=3)
        bad = SuiteReport("zero-sets", 2, 1, 0, 0.0, checks=1, max_rel_err=1.0,
                          failures=[Failure(0, {}, None, None, 1.0, "miss")])
        md = reports_to_markdown([good, bad])
        assert md.startswith(MD_HEADER)
        assert "| cocycle | 2 |" in md and "| FAIL |" in md and "miss" in md


class TestRatio:
    def test_value(self):
        assert ratio_of_ratios(6, 3, 4, 2) == 1

    def test_degenerate(self):
        with pytest.raises(DegenerateRatioError):
            ratio_of_ratios(1, 0, 1, 1)
        with pytest.raises(DegenerateRatioError):
            ratio_of_ratios(1, 1, 0, 1)
