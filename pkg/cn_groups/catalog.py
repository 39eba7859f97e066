"""
Built-in group catalog

The catalog is a list of GroupSpec entries. scripts/build_catalog.py writes
them to catalog/*.json; cmd_verify without a directory uses this list
directly, so both routes see the same groups.
"""

import json
import re
from pathlib import Path
from typing import List, Optional, Tuple

from loguru import logger

from cn_groups.constructors import (
    alternating_group,
    c3_times_q8,
    cyclic_group,
    dicyclic_group,
    dihedral_group,
    direct_product,
    gl23,
    sl23,
    symmetric_group,
)
from cn_groups.spec_parser import GroupSpec, SpecFailure, SpecParser, spec_from_group


# (modulus, multiplier, order of the multiplier) for Z/p x| C_k
AFFINE_LINES = (
    (5, 2, 4),
    (7, 3, 6),
    (11, 2, 10),
    (13, 2, 12),
    (7, 2, 3),
    (11, 3, 5),
    (13, 3, 3),
)

FAMILY_ENTRIES = (
    ("example1(C4,5)", "example1", {"K": "C4", "p": 5}),
    ("example1(trivial,3)", "example1", {"K": "trivial", "p": 3}),
    ("example1(C3xQ8,13)", "example1", {"K": "C3xQ8", "p": 13}),
    ("example2(3,2)", "example2", {"m": 3, "k": 2}),
    ("example2(3,4)", "example2", {"m": 3, "k": 4}),
    ("example2(5,4)", "example2", {"m": 5, "k": 4}),
    ("example4_a5", "example4_a5", {}),
    ("negative_frobenius_sl23(7)", "negative_frobenius_sl23", {"p": 7}),
)


def _named_groups() -> List[GroupSpec]:
    groups = [symmetric_group(n) for n in range(1, 7)]
    groups += [alternating_group(n) for n in range(3, 7)]
    groups += [cyclic_group(n) for n in (2, 3, 4, 5, 6, 8, 12)]
    groups += [dihedral_group(n) for n in range(3, 25)]
    groups += [dicyclic_group(n) for n in range(2, 13)]
    groups += [c3_times_q8(), sl23(), gl23()]
    groups += [
        direct_product(cyclic_group(2), dicyclic_group(2)),
        direct_product(cyclic_group(5), dicyclic_group(2)),
        direct_product(cyclic_group(2), symmetric_group(3)),
        direct_product(cyclic_group(3), symmetric_group(3)),
        direct_product(cyclic_group(2), alternating_group(5)),
    ]
    return [spec_from_group(G) for G in groups]


def _semidirect_entries() -> List[GroupSpec]:
    specs = []
    for modulus, multiplier, order in AFFINE_LINES:
        acting = spec_from_group(cyclic_group(order))
        specs.append(GroupSpec(
            name=f"C{modulus}:C{order}",
            kind="semidirect",
            modulus=modulus,
            dim=1,
            acting=acting,
            matrices=[[[multiplier]]],
        ))
    # S4 as the natural action of GL(2,2) = S3 on the Klein four-group
    specs.append(GroupSpec(
        name="(2^2):S3",
        kind="semidirect",
        modulus=2,
        dim=2,
        acting=spec_from_group(symmetric_group(3)),
        matrices=[[[0, 1], [1, 0]], [[0, 1], [1, 1]]],
    ))
    return specs


def builtin_specs() -> List[GroupSpec]:
    """Every catalog entry, sorted by name"""
    specs = _named_groups() + _semidirect_entries()
    specs += [GroupSpec(name=name, kind="family", family=family, params=dict(params))
              for name, family, params in FAMILY_ENTRIES]
    return sorted(specs, key=lambda s: s.name)


def spec_filename(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") + ".json"


def write_catalog(directory: Path, specs: Optional[List[GroupSpec]] = None) -> List[Path]:
    """Materialise specs as one JSON file per group"""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for spec in specs if specs is not None else builtin_specs():
        path = directory / spec_filename(spec.name)
        path.write_text(json.dumps(spec.to_dict(), indent=2) + "\n", encoding="utf-8")
        written.append(path)
    logger.debug(f"Wrote {len(written)} catalog specs to {directory}")
    return written


def load_catalog(directory: Optional[Path] = None) -> Tuple[List[GroupSpec], List[SpecFailure]]:
    """Specs from a directory, or the built-in list when no directory is given"""
    if directory is None:
        return builtin_specs(), []
    return SpecParser().scan_directory(directory)
