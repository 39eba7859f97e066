"""
Command implementations behind main.py

Each cmd_* returns a CommandResult holding the JSON document to emit and
the process exit code. Library errors are caught here and nowhere else.
"""

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import psutil
from loguru import logger

from cn_groups import __version__
from cn_groups.action_lab import FAIL, check_eleme_shadow, random_instances, run_lemma_checks
from cn_groups.bounds import Bounds, get_bounds, set_bounds
from cn_groups.catalog import load_catalog
from cn_groups.cn_classifier import Case, classify, run_sweeps
from cn_groups.errors import (
    EXIT_OK,
    EXIT_VIOLATION,
    CNGroupsError,
    InputError,
    ResourceBoundError,
    exit_code_for,
)
from cn_groups.logging_config import log_performance_metrics
from cn_groups.spec_parser import GroupSpec, SpecParser, parse_spec, spec_from_group


@dataclass
class CommandResult:
    document: Dict[str, Any]
    exit_code: int = EXIT_OK


def render(document: Dict[str, Any]) -> str:
    """Canonical JSON text; insertion order is the field order"""
    return json.dumps(document, indent=2) + "\n"


def error_entry(name: str, exc: BaseException) -> Dict[str, Any]:
    entry = {"name": name, "error": str(exc), "kind": exc.__class__.__name__}
    if isinstance(exc, ResourceBoundError):
        entry["parameter"] = exc.parameter
    return entry


def resolve_jobs(jobs: int) -> int:
    """0 means one worker per CPU"""
    if jobs <= 0:
        return psutil.cpu_count() or 1
    return jobs


def _init_worker(bounds: Bounds):
    set_bounds(bounds)


def _map_specs(func: Callable[[Dict[str, Any], Optional[int]], Dict[str, Any]],
               specs: Sequence[GroupSpec], jobs: int, seed: Optional[int]) -> List[Dict[str, Any]]:
    """Apply func to every spec, in-process or across a worker pool"""
    payloads = [spec.to_dict() for spec in specs]
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(payloads) <= 1:
        return [func(payload, seed) for payload in payloads]
    logger.info(f"Sharding {len(payloads)} groups across {jobs} workers")
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(get_bounds(),)) as executor:
        return list(executor.map(func, payloads, [seed] * len(payloads)))


def _classify_payload(payload: Dict[str, Any], seed: Optional[int]) -> Dict[str, Any]:
    name = payload.get("name", "?")
    try:
        spec = parse_spec(payload)
        return classify(spec.build(), name=spec.name).to_dict(seed)
    except CNGroupsError as e:
        logger.error(f"Could not classify {name}: {e}")
        return error_entry(name, e)


def _lemmas_payload(payload: Dict[str, Any], seed: Optional[int]) -> Dict[str, Any]:
    name = payload.get("name", "?")
    try:
        G = parse_spec(payload).build()
        results = [r.to_dict() for r in run_sweeps(G)]
        results.append(check_eleme_shadow(G).to_dict())
    except CNGroupsError as e:
        logger.error(f"Could not run sweeps on {name}: {e}")
        return error_entry(name, e)
    return {"name": name, "results": results}


@log_performance_metrics
def cmd_analyze(spec_file: Path, seed: Optional[int] = None) -> CommandResult:
    """Classify the group of one spec file"""
    try:
        spec = SpecParser().parse_file(spec_file).spec
        report = classify(spec.build(), name=spec.name).to_dict(seed)
    except OSError as e:
        error = InputError(f"cannot read {spec_file}: {e}")
        logger.error(str(error))
        return CommandResult(error_entry(spec_file.stem, error), exit_code_for(error))
    except CNGroupsError as e:
        logger.error(f"Analysis of {spec_file} failed: {e}")
        return CommandResult(error_entry(spec_file.stem, e), exit_code_for(e))

    logger.info(f"{report['group_name']}: {report['case']} (order {report['group_order']})")
    code = EXIT_VIOLATION if report["case"] == Case.THEOREM_VIOLATION.value else EXIT_OK
    return CommandResult(report, code)


@log_performance_metrics
def cmd_verify(directory: Optional[Path] = None, jobs: int = 1, seed: Optional[int] = None) -> CommandResult:
    """Classify every catalog group; exit 1 iff some report is a TheoremViolation"""
    if directory is not None and not directory.is_dir():
        e = InputError(f"catalog directory {directory} does not exist")
        logger.error(str(e))
        return CommandResult(error_entry(str(directory), e), exit_code_for(e))

    specs, failures = load_catalog(directory)
    entries = _map_specs(_classify_payload, specs, jobs, seed)
    entries.extend(f.to_dict() for f in failures)
    entries.sort(key=lambda entry: entry.get("group_name", entry.get("name", "")))

    reports = [e for e in entries if "case" in e]
    histogram = Counter(r["case"] for r in reports)
    violations = histogram.get(Case.THEOREM_VIOLATION.value, 0)
    summary = {
        "total": len(entries),
        "cn_count": sum(1 for r in reports if r["is_cn"]),
        "cases": {case.value: histogram[case.value] for case in Case if histogram[case.value]},
        "violations": violations,
        "errors": len(entries) - len(reports),
    }
    logger.info(f"Verified {summary['total']} groups: {summary['cn_count']} CN, {violations} violations")
    document = {"summary": summary, "reports": entries, "version": __version__, "seed": seed}
    return CommandResult(document, EXIT_VIOLATION if violations else EXIT_OK)


def parse_params(pairs: Sequence[str]) -> Dict[str, Any]:
    """key=value pairs; integer-looking values become ints"""
    params: Dict[str, Any] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise InputError(f"expected key=value, got {pair!r}")
        value = value.strip()
        params[key.strip()] = int(value) if value.lstrip("-").isdigit() else value
    return params


@log_performance_metrics
def cmd_construct(family: str, pairs: Sequence[str], output: Optional[Path] = None) -> CommandResult:
    """Build a family member and emit it as a perm-kind spec"""
    try:
        params = parse_params(pairs)
        label = ",".join(str(v) for v in params.values())
        spec = parse_spec({"name": f"{family}({label})" if label else family, "kind": "family",
                           "family": family, "params": params})
        G = spec.build()
    except CNGroupsError as e:
        logger.error(f"Construction of {family} failed: {e}")
        return CommandResult(error_entry(family, e), exit_code_for(e))

    document = spec_from_group(G, spec.name).to_dict()
    if output is not None:
        output.write_text(render(document), encoding="utf-8")
        logger.info(f"Wrote {spec.name} (order {G.order()}) to {output}")
    return CommandResult(document)


@log_performance_metrics
def cmd_lemmas(directory: Optional[Path] = None, seed: int = 42, jobs: int = 1,
               instances: int = 100) -> CommandResult:
    """CN-theory sweeps over the catalog plus the action checks on seeded instances"""
    if directory is not None and not directory.is_dir():
        e = InputError(f"catalog directory {directory} does not exist")
        logger.error(str(e))
        return CommandResult(error_entry(str(directory), e), exit_code_for(e))

    specs, failures = load_catalog(directory)
    groups = _map_specs(_lemmas_payload, specs, jobs, seed)
    groups.extend(f.to_dict() for f in failures)
    groups.sort(key=lambda entry: entry["name"])
    sweep_failures = sum(1 for g in groups for r in g.get("results", []) if r["status"] == FAIL)

    try:
        generated = random_instances(seed, instances)
    except CNGroupsError as e:
        logger.error(f"Instance generation failed: {e}")
        return CommandResult(error_entry("random_instances", e), exit_code_for(e))

    totals: Dict[str, Counter] = {}
    check_failures = []
    for inst in generated:
        for result in run_lemma_checks(inst):
            totals.setdefault(result.name, Counter())[result.status] += 1
            if result.status == FAIL:
                check_failures.append({"instance": inst.name, **result.to_dict()})

    logger.info(f"Lemma suite: {sweep_failures} sweep failures, {len(check_failures)} check failures")
    document = {
        "seed": seed,
        "version": __version__,
        "groups": groups,
        "instances": {
            "count": len(generated),
            "totals": {name: dict(sorted(counts.items())) for name, counts in sorted(totals.items())},
            "failures": check_failures,
        },
        "summary": {
            "sweep_failures": sweep_failures,
            "check_failures": len(check_failures),
            "errors": sum(1 for g in groups if "error" in g),
        },
    }
    failed = sweep_failures or check_failures
    return CommandResult(document, EXIT_VIOLATION if failed else EXIT_OK)
