"""
Test the command implementations and the main entry point
"""

import json

import pytest

from cn_groups.cli import (
    cmd_analyze,
    cmd_construct,
    cmd_lemmas,
    cmd_verify,
    error_entry,
    parse_params,
    render,
    resolve_jobs,
)
from cn_groups.cn_classifier import classify
from cn_groups.constructors import example1, example2, example4_a5, group_from_name
from cn_groups.errors import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_RESOURCE_BOUND,
    EnumerationBoundError,
    InputError,
)
from cn_groups.spec_parser import parse_spec, spec_from_group
from main import main


def write_group(directory, G, name):
    path = directory / f"{name}.json"
    path.write_text(render(spec_from_group(G, name).to_dict()))
    return path


@pytest.mark.unit
class TestHelpers:
    """Test parameter parsing and error entries"""

    def test_parse_params(self):
        """Test integers are converted and names are kept"""
        assert parse_params(["m=3", "K=C4", "p=-1"]) == {"m": 3, "K": "C4", "p": -1}

    def test_parse_params_rejects_bare_words(self):
        """Test a pair without = is refused"""
        with pytest.raises(InputError):
            parse_params(["m3"])

    def test_error_entry_names_bound(self):
        """Test resource errors report the bound they hit"""
        entry = error_entry("S5", EnumerationBoundError("too many elements", 120, 100))
        assert entry["kind"] == "EnumerationBoundError"
        assert entry["parameter"] == "max_order"

    def test_resolve_jobs(self):
        """Test 0 means one worker per CPU"""
        assert resolve_jobs(3) == 3
        assert resolve_jobs(0) >= 1

    def test_render_is_stable(self):
        """Test rendering keeps insertion order and ends with a newline"""
        text = render({"b": 1, "a": 2})
        assert text.endswith("\n")
        assert text.index('"b"') < text.index('"a"')


@pytest.mark.unit
class TestAnalyze:
    """Test the analyze command"""

    def test_analyze_s4(self, catalog_dir, s4):
        """Test S4 is reported in the Frobenius-quotient case"""
        result = cmd_analyze(write_group(catalog_dir, s4, "S4"), seed=42)
        assert result.exit_code == EXIT_OK
        assert result.document["case"] == "FrobeniusQuotient"
        assert result.document["seed"] == 42

    def test_analyze_missing_file(self, tmp_path):
        """Test an unreadable file is an input error"""
        result = cmd_analyze(tmp_path / "missing.json")
        assert result.exit_code == EXIT_INPUT_ERROR
        assert result.document["kind"] == "InputError"

    def test_analyze_bad_spec(self, catalog_dir):
        """Test a malformed spec is an input error naming the spec"""
        path = catalog_dir / "broken.json"
        path.write_text('{"name": "x", "kind": "perm"}')
        result = cmd_analyze(path)
        assert result.exit_code == EXIT_INPUT_ERROR
        assert result.document["name"] == "broken"
        assert "degree" in result.document["error"]

    def test_analyze_resource_bound(self, catalog_dir, s4, bounds):
        """Test exceeding a bound exits 3 and names the bound"""
        path = write_group(catalog_dir, s4, "S4")
        bounds(max_order=10)
        result = cmd_analyze(path)
        assert result.exit_code == EXIT_RESOURCE_BOUND
        assert "parameter" in result.document


@pytest.mark.unit
class TestVerify:
    """Test the verify command"""

    def test_empty_directory(self, catalog_dir):
        """Test an empty catalog verifies cleanly"""
        result = cmd_verify(catalog_dir)
        assert result.exit_code == EXIT_OK
        assert result.document["summary"]["total"] == 0
        assert result.document["reports"] == []

    def test_missing_directory(self, tmp_path):
        """Test a missing directory is an input error"""
        result = cmd_verify(tmp_path / "nowhere")
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_mixed_directory(self, catalog_dir, s4, s5):
        """Test reports, failures and the summary for a mixed catalog"""
        write_group(catalog_dir, s4, "S4")
        write_group(catalog_dir, s5, "S5")
        (catalog_dir / "broken.json").write_text("{")

        result = cmd_verify(catalog_dir, seed=7)
        summary = result.document["summary"]
        assert result.exit_code == EXIT_OK
        assert summary["total"] == 3
        assert summary["cn_count"] == 1
        assert summary["errors"] == 1
        assert summary["cases"] == {"FrobeniusQuotient": 1, "NotCN": 1}
        assert [entry.get("group_name", entry.get("name")) for entry in result.document["reports"]] == \
            ["S4", "S5", "broken"]
        assert result.document["seed"] == 7

    @pytest.mark.integration
    def test_jobs_do_not_change_output(self, catalog_dir, s3, s4, a4, q8):
        """Test a worker pool gives the same document as a single process"""
        for G in (s3, s4, a4, q8):
            write_group(catalog_dir, G, G.name)
        single = cmd_verify(catalog_dir, jobs=1, seed=1)
        pooled = cmd_verify(catalog_dir, jobs=2, seed=1)
        assert render(single.document) == render(pooled.document)


@pytest.mark.unit
class TestConstruct:
    """Test the construct command"""

    def test_example2_round_trip(self, tmp_path):
        """Test the emitted spec rebuilds a group of the same order"""
        output = tmp_path / "example2.json"
        result = cmd_construct("example2", ["m=3", "k=2"], output=output)
        assert result.exit_code == EXIT_OK
        assert result.document["name"] == "example2(3,2)"
        assert result.document["kind"] == "perm"
        saved = json.loads(output.read_text())
        assert saved == result.document
        assert parse_spec(saved).build().order() == 24

    @pytest.mark.parametrize("family, pairs, build", [
        ("example1", ["K=C4", "p=5"], lambda: example1(group_from_name("C4"), 5)),
        ("example2", ["m=3", "k=2"], lambda: example2(3, 2)),
        pytest.param("example4_a5", [], example4_a5, marks=pytest.mark.slow),
    ])
    def test_analyze_matches_in_memory_report(self, tmp_path, family, pairs, build):
        """Test analyzing the emitted spec gives the report of the group built in memory"""
        output = tmp_path / f"{family}.json"
        constructed = cmd_construct(family, pairs, output=output)
        assert constructed.exit_code == EXIT_OK

        analyzed = cmd_analyze(output, seed=42).document
        expected = classify(build(), name="in-memory").to_dict(42)
        assert list(analyzed) == list(expected)
        assert analyzed["group_name"] == constructed.document["name"]
        analyzed.pop("group_name")
        expected.pop("group_name")
        assert analyzed == expected

    def test_trivial_complement(self):
        """Test example1 with a trivial K is Z/p"""
        result = cmd_construct("example1", ["K=trivial", "p=3"])
        assert result.exit_code == EXIT_OK
        assert parse_spec(result.document).build().order() == 3

    def test_unknown_family(self):
        """Test an unknown family exits 2"""
        result = cmd_construct("example9", [])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert result.document["kind"] == "SpecError"

    def test_bad_parameters(self):
        """Test a construction input error exits 2"""
        result = cmd_construct("example2", ["m=4", "k=2"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_search_budget(self, bounds):
        """Test an exhausted search exits 3 naming search_budget"""
        bounds(search_budget=5)
        result = cmd_construct("example2", ["m=3", "k=2"])
        assert result.exit_code == EXIT_RESOURCE_BOUND
        assert result.document["parameter"] == "search_budget"


@pytest.mark.integration
class TestMain:
    """Test argument handling in the entry point"""

    def test_analyze_to_output_file(self, catalog_dir, tmp_path, s4, bounds):
        """Test -o before the subcommand writes the report"""
        spec = write_group(catalog_dir, s4, "S4")
        output = tmp_path / "report.json"
        code = main(["--log-level", "WARNING", "-o", str(output), "analyze", str(spec)])
        assert code == EXIT_OK
        report = json.loads(output.read_text())
        assert report["group_name"] == "S4"
        assert report["seed"] == 42

    def test_seed_flag(self, catalog_dir, tmp_path, s3, bounds):
        """Test --seed reaches the report"""
        spec = write_group(catalog_dir, s3, "S3")
        output = tmp_path / "report.json"
        main(["--log-level", "WARNING", "--seed", "9", "-o", str(output), "analyze", str(spec)])
        assert json.loads(output.read_text())["seed"] == 9

    def test_max_order_flag(self, catalog_dir, tmp_path, s4, bounds):
        """Test --max-order tightens the bound"""
        spec = write_group(catalog_dir, s4, "S4")
        code = main(["--log-level", "WARNING", "--max-order", "10", "-o", str(tmp_path / "out.json"),
                     "analyze", str(spec)])
        assert code == EXIT_RESOURCE_BOUND

    def test_construct_writes_spec(self, tmp_path, bounds):
        """Test construct writes its spec to -o"""
        output = tmp_path / "e2.json"
        code = main(["--log-level", "WARNING", "-o", str(output), "construct", "example2", "m=3", "k=2"])
        assert code == EXIT_OK
        assert json.loads(output.read_text())["name"] == "example2(3,2)"

    def test_missing_subcommand(self):
        """Test argparse refuses a bare invocation"""
        with pytest.raises(SystemExit):
            main([])


@pytest.mark.slow
class TestLemmas:
    """Test the lemma command end to end"""

    def test_small_catalog(self, catalog_dir, s4, a5):
        """Test sweeps and checks pass on a small catalog"""
        write_group(catalog_dir, s4, "S4")
        write_group(catalog_dir, a5, "A5")
        result = cmd_lemmas(catalog_dir, seed=42, instances=20)
        assert result.exit_code == EXIT_OK
        document = result.document
        assert [g["name"] for g in document["groups"]] == ["A5", "S4"]
        assert document["instances"]["count"] == 20
        assert document["summary"] == {"sweep_failures": 0, "check_failures": 0, "errors": 0}
        assert "eleme_shadow" in [r["name"] for r in document["groups"][0]["results"]]
