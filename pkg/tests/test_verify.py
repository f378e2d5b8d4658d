import numpy as np
import pytest

from maglab import verify


class TestCheck:
    @pytest.mark.parametrize(
        "residual,tol,kind,passed",
        [(1e-10, 1e-9, "max", True), (1e-8, 1e-9, "max", False), (4.0, (3.5, 4.5), "band", True), (5.0, (3.5, 4.5), "band", False), (np.nan, 1.0, "max", False)],
    )
    def test_passed(self, residual, tol, kind, passed):
        assert verify.Check("s", "c", residual, tol, kind).passed is passed

    def test_report(self):
        rep = verify.VerifyReport("x", 3)
        rep.merge("a", [1e-12, 3e-12], 1e-9, "x")
        rep.add("x", "b", 4.0, (3.5, 4.5), kind="band")
        d = rep.to_dict()
        assert d["passed"] and d["checks"][0]["residual"] == 3e-12 and d["checks"][0]["samples"] == 2
        assert d["checks"][1]["tolerance"] == [3.5, 4.5]
        assert "all checks passed" in rep.format_text()


class TestSuites:
    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            verify.run("everything")

    def test_identities_small(self):
        rep = verify.run("identities", seed=1, count=10)
        assert rep.passed, rep.format_text()
        names = {c.name for c in rep.checks}
        assert any("bianchi" in n for n in names) and any("[fd]" in n for n in names)

    def test_frames_deterministic(self):
        a = verify.run("frames", seed=7).to_dict()
        b = verify.run("frames", seed=7).to_dict()
        assert a == b and a["passed"]

    def test_tol_override_fails_everything_tight(self):
        rep = verify.run("frames", seed=0, tol=1e-300)
        assert not rep.passed

    def test_variants_cover_every_combination(self):
        seen = {verify.space_variant(k) for k in range(24)}
        assert len(seen) == 24
        assert {v[0] for v in seen} == {2, 3, 4}


class TestTransportPieces:
    def test_extremal_short(self):
        drift, distance, steps = verify.extremal_checks(seed=2, steps=400, span=1.0)
        assert steps == 400
        assert drift < 1e-8 and distance < 1e-8

    def test_parallelogram(self):
        exponent, err = verify.parallelogram_checks()
        assert 1.9 <= exponent <= 2.1 and err < 0.02

    def test_gauge(self):
        assert verify.gauge_check(seed=4, span=0.5) < 1e-8
