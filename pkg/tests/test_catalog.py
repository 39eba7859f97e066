"""
Test the built-in catalog and the acceptance runs over it
"""

import pytest

from cn_groups.catalog import builtin_specs, load_catalog, spec_filename, write_catalog
from cn_groups.cli import cmd_lemmas, cmd_verify
from cn_groups.cn_classifier import Case, classify
from cn_groups.errors import EXIT_OK
from cn_groups.structure import fitting, minimal_normal_subgroups, p_core, prime_divisors
from tests.oracles import (
    brute_force_closure,
    largest_normal_nilpotent,
    largest_normal_p_subgroup,
    minimal_normal_orders,
)


def catalog_by_name():
    return {spec.name: spec for spec in builtin_specs()}


@pytest.mark.unit
class TestBuiltinCatalog:
    """Test catalog contents and file round trips"""

    def test_names_unique_and_sorted(self):
        """Test names are unique and listed in order"""
        names = [spec.name for spec in builtin_specs()]
        assert len(names) == len(set(names))
        assert names == sorted(names)

    def test_size(self):
        """Test the catalog holds well over fifty groups"""
        assert len(builtin_specs()) == 74

    def test_filenames_unique(self):
        """Test sanitised file names do not collide"""
        files = [spec_filename(spec.name) for spec in builtin_specs()]
        assert len(files) == len(set(files))
        assert spec_filename("C5:C4") == "C5_C4.json"
        assert spec_filename("(2^2):S3") == "2_2_S3.json"

    def test_every_kind_present(self):
        """Test perm, semidirect and family entries are all present"""
        kinds = {spec.kind for spec in builtin_specs()}
        assert kinds == {"perm", "semidirect", "family"}

    def test_write_and_load(self, catalog_dir):
        """Test written files load back as the same specs"""
        written = write_catalog(catalog_dir)
        assert len(written) == 74
        specs, failures = load_catalog(catalog_dir)
        assert failures == []
        expected = sorted(builtin_specs(), key=lambda s: spec_filename(s.name))
        assert [s.name for s in specs] == [s.name for s in expected]
        assert [s.kind for s in specs] == [s.kind for s in expected]

    def test_load_without_directory(self):
        """Test the built-in list is used when no directory is given"""
        specs, failures = load_catalog()
        assert len(specs) == 74 and failures == []

    @pytest.mark.parametrize("name, case", [
        ("C5:C4", Case.CYCLIC),
        ("C7:C3", Case.CYCLIC),
        ("(2^2):S3", Case.FROBENIUS_QUOTIENT),
        ("D10", Case.CYCLIC),
        ("D12", Case.NOT_CN),
        ("Dic3", Case.NOT_CN),
        ("Q8", Case.CYCLIC),
        ("A5", Case.ALMOST_SIMPLE),
        ("C2xA5", Case.NOT_CN),
        ("SL(2,3)", Case.NOT_CN),
    ])
    def test_small_entries(self, name, case):
        """Test the case of small catalog entries"""
        spec = catalog_by_name()[name]
        assert classify(spec.build(), spec.name).case == case


@pytest.mark.slow
class TestCatalogAcceptance:
    """Test whole-catalog runs"""

    def test_verify_has_no_violations(self):
        """Test no catalog group contradicts the case analysis"""
        result = cmd_verify(jobs=1, seed=42)
        summary = result.document["summary"]
        assert result.exit_code == EXIT_OK
        assert summary["violations"] == 0
        assert summary["errors"] == 0
        assert summary["total"] == 74

    def test_family_cases(self):
        """Test family entries land in their expected cases"""
        reports = {r["group_name"]: r for r in cmd_verify(jobs=1, seed=42).document["reports"]}
        assert reports["example4_a5"]["case"] == Case.ALMOST_SIMPLE.value
        assert reports["example4_a5"]["fitting_order"] == 16
        assert reports["example2(5,4)"]["case"] == Case.FROBENIUS_QUOTIENT.value
        assert reports["example1(C3xQ8,13)"]["case"] == Case.CYCLIC_ODD_TIMES_QUATERNION.value
        assert reports["negative_frobenius_sl23(7)"]["case"] == Case.NOT_CN.value
        assert reports["S4"]["frobenius_data"] == {"kernel_order": 3, "complement_order": 2}

    def test_chain_order_matches_enumeration(self):
        """Test stabilizer chain orders against brute-force closure for perm entries"""
        for spec in builtin_specs():
            if spec.kind != "perm":
                continue
            G = spec.build()
            if G.order() > 2000:
                continue
            assert len(brute_force_closure(G.degree, G.generators)) == G.order(), f"{spec.name} differs"

    def test_normal_structure_matches_brute_force(self, small_catalog):
        """Test fitting, p_core and minimal normal subgroups against brute-force normal subgroups"""
        for name, G in small_catalog:
            assert fitting(G).order() == largest_normal_nilpotent(G), f"{name}: Fitting subgroup differs"
            for p in prime_divisors(G.order()):
                assert p_core(G, p).order() == largest_normal_p_subgroup(G, p), f"{name}: O_{p} differs"
            found = sorted(N.order() for N in minimal_normal_subgroups(G))
            assert found == minimal_normal_orders(G), f"{name}: minimal normal subgroups differ"

    def test_lemma_suite_over_catalog(self):
        """Test every sweep, the element-scan check and the seeded action checks pass on the catalog"""
        result = cmd_lemmas(seed=42, instances=100)
        assert result.exit_code == EXIT_OK
        document = result.document
        assert len(document["groups"]) == 74
        assert document["summary"] == {"sweep_failures": 0, "check_failures": 0, "errors": 0}
        for group in document["groups"]:
            names = [r["name"] for r in group["results"]]
            assert "eleme_shadow" in names and "fitting_height_shadow" in names, group["name"]
