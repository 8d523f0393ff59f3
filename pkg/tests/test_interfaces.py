"""Problem-file schema, pipeline reports, CLI, and the FastAPI service."""

import json
import subprocess
import sys

import pytest

from vjp.errors import SchemaError
from vjp.examples_gallery import GALLERY, free_particle, monopole
from vjp.pipeline import (
    run_check_variational,
    run_derive,
    run_glue,
    run_noether,
    run_obstruction,
)
from vjp.problem import load_problem
from vjp.reports import canonical_json, render_text


@pytest.fixture(scope="module")
def fp_problem():
    return load_problem(free_particle())


class TestProblemFile:
    def test_all_gallery_documents_load(self):
        for name, builder in GALLERY.items():
            problem = load_problem(builder())
            assert problem.space.n >= 1, name

    def test_schema_version_enforced(self):
        doc = free_particle()
        doc["schema"] = "vjp-schema-0"
        with pytest.raises(SchemaError):
            load_problem(doc)

    def test_unknown_fields_rejected(self):
        doc = free_particle()
        doc["surprise"] = 1
        with pytest.raises(SchemaError):
            load_problem(doc)

    def test_grammar_errors_are_input_errors(self):
        doc = free_particle()
        doc["lagrangian"] = {"main": "1/2*u_t^2 +"}
        with pytest.raises(Exception) as err:
            load_problem(doc)
        assert getattr(err.value, "exit_code", None) == 2

    def test_unknown_tolerance(self):
        doc = free_particle()
        doc["tolerances"] = {"tau_nope": 1.0}
        with pytest.raises(SchemaError):
            load_problem(doc)

    def test_constants_rational_vs_numeric(self):
        doc = free_particle()
        doc["constants"] = {"k": {"rational": "3/2"}}
        doc["lagrangian"] = {"main": "k*u_t^2"}
        problem = load_problem(doc)
        from fractions import Fraction

        assert problem.lagrangians["main"].density.leading_coefficient() == Fraction(
            3, 2
        )
        doc["constants"] = {"k": {"rational": "1", "numeric": 1.0}}
        with pytest.raises(SchemaError):
            load_problem(doc)

    def test_order_cap_is_schema_error(self):
        doc = free_particle()
        doc["space"]["order"] = 5
        with pytest.raises(SchemaError):
            load_problem(doc)

    def test_needs_dynamics(self):
        doc = free_particle()
        del doc["lagrangian"]
        with pytest.raises(SchemaError):
            load_problem(doc)


class TestPipeline:
    def test_check_variational_positive(self, fp_problem):
        report = run_check_variational(fp_problem)
        assert report["locally_variational"] and report["globally_variational"]
        assert report["exit_code"] == 0

    def test_check_variational_negative(self):
        from vjp.examples_gallery import nonvariational_flow

        report = run_check_variational(load_problem(nonvariational_flow()))
        assert not report["locally_variational"]
        assert report["exit_code"] == 1
        assert report["helmholtz"]["main"]["residuals"]

    def test_derive_from_source_form(self):
        from vjp.examples_gallery import nonvariational_flow

        doc = nonvariational_flow()
        doc["source_form"] = {"main": ["-u_{tt}"]}
        report = run_derive(load_problem(doc))
        entry = report["charts"]["main"]
        assert entry["helmholtz_passes"] and entry["round_trip"]
        assert "u_{t t}" in entry["tonti_lagrangian"]

    def test_noether_report_structure(self, fp_problem):
        report = run_noether(fp_problem)
        boost = report["symmetries"]["boost"]
        assert boost["classification"] == "equation-symmetry"
        chart = boost["charts"]["main"]
        assert chart["conservation_certificate"]
        assert chart["strong_equivalence_certificate"]
        assert boost["conservation_drift"]["drift"] < 1e-8

    def test_noether_non_symmetry(self):
        doc = free_particle()
        doc["symmetries"] = [{"id": "bad", "base": ["0"], "fiber": ["u^2*t"]}]
        report = run_noether(load_problem(doc))
        entry = report["symmetries"]["bad"]
        assert entry["classification"] == "not-a-symmetry"
        assert "noether_bessel_hagen" not in entry["charts"]["main"]

    def test_reports_are_json_round_trippable(self, fp_problem):
        report = run_glue(fp_problem)
        text = canonical_json(report)
        assert json.loads(text) == report
        assert render_text(report).startswith("== glue ==")

    def test_determinism_same_seed(self, fp_problem):
        a = canonical_json(run_noether(fp_problem, seed=99))
        b = canonical_json(run_noether(fp_problem, seed=99))
        assert a == b


class TestCLI:
    def _run(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "vjp.cli", *args],
            capture_output=True,
            text=True,
        )

    def test_check_exit_codes(self, tmp_path):
        out = self._run(
            "check-variational", "--problem", "problems/free_particle.json"
        )
        assert out.returncode == 0
        out = self._run(
            "check-variational", "--problem", "problems/nonvariational_flow.json"
        )
        assert out.returncode == 1

    def test_schema_error_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"schema": "vjp-schema-1"}))
        out = self._run("check-variational", "--problem", str(bad))
        assert out.returncode == 2

    def test_math_error_exit_3(self):
        out = self._run("noether", "--problem", "problems/nonvariational_flow.json")
        assert out.returncode == 3

    def test_report_file_and_text(self, tmp_path):
        path = tmp_path / "report.json"
        out = self._run(
            "derive",
            "--problem",
            "problems/wave_single_chart.json",
            "--report",
            str(path),
            "--text",
        )
        assert out.returncode == 0
        assert "== derive ==" in out.stdout
        data = json.loads(path.read_text())
        assert data["command"] == "derive"

    def test_seed_determinism_bytes(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        for p in (p1, p2):
            out = self._run(
                "glue",
                "--problem",
                "problems/monopole_g1.json",
                "--seed",
                "5",
                "--report",
                str(p),
            )
            assert out.returncode == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_tolerance_override(self):
        out = self._run(
            "glue",
            "--problem",
            "problems/free_particle.json",
            "--tolerance",
            "tau_class=0.5",
        )
        assert out.returncode == 0


class TestService:
    @pytest.fixture(scope="class")
    def client(self):
        from fastapi.testclient import TestClient

        from vjp.service import create_app

        return TestClient(create_app())

    def test_health(self, client):
        data = client.get("/v1/health").json()
        assert data["schema"] == "vjp-schema-1"

    def test_commands(self, client):
        prob = free_particle()
        for cmd in ("check-variational", "derive", "noether", "glue", "obstruction"):
            resp = client.post(f"/v1/{cmd}", json={"problem": prob})
            assert resp.status_code == 200, (cmd, resp.text)
            assert resp.json()["report"]["command"] == cmd

    def test_input_error_maps_to_422(self, client):
        prob = free_particle()
        prob["lagrangian"] = {"main": "(u_t"}
        resp = client.post("/v1/derive", json={"problem": prob})
        assert resp.status_code == 422
        assert resp.json()["error"]["exit_code"] == 2

    def test_math_error_maps_to_409(self, client):
        from vjp.examples_gallery import nonvariational_flow

        resp = client.post("/v1/noether", json={"problem": nonvariational_flow()})
        assert resp.status_code == 409
        assert resp.json()["error"]["exit_code"] == 3

    def test_seed_override_changes_nothing_for_symbolic(self, client):
        prob = free_particle()
        a = client.post("/v1/derive", json={"problem": prob, "seed": 1}).json()
        b = client.post("/v1/derive", json={"problem": prob, "seed": 2}).json()
        a["report"].pop("seed")
        b["report"].pop("seed")
        assert a == b

    def test_cli_as_client_of_service(self, client, tmp_path, monkeypatch):
        # the CLI --server path posts the same body the service expects
        import httpx

        from vjp import cli as cli_mod

        def fake_post(url, json=None, timeout=None):
            assert url.endswith("/v1/derive")
            resp = client.post("/v1/derive", json=json)

            class R:
                status_code = resp.status_code

                def json(self):
                    return resp.json()

            return R()

        monkeypatch.setattr(httpx, "post", fake_post)
        report = cli_mod._run_remote(
            "http://fake", "derive", "problems/free_particle.json", 3, {}
        )
        assert report["command"] == "derive"


class TestReportRoundTrip:
    def test_report_expressions_reparse(self):
        """Expression strings in reports stay inside the input grammar."""
        from vjp import expr as E
        from vjp.examples_gallery import monopole

        problem = load_problem(monopole("1"))
        report = run_noether(problem)
        sp = problem.space
        for entry in report["symmetries"].values():
            for chart in entry["charts"].values():
                for key in ("epsilon", "beta", "nu", "noether_bessel_hagen", "strong"):
                    if key in chart:
                        E.parse(chart[key], sp, max_order=8)
        glue = run_glue(problem)
        for text in glue["presentation"]["lagrangians"].values():
            E.parse(text, sp, max_order=8)
