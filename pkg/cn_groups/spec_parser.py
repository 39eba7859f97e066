"""
Group spec parser for JSON spec documents and spec directories
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from loguru import logger

from cn_groups.errors import CNGroupsError, SpecError
from cn_groups.perm_core import PermGroup, Permutation


KINDS = ("perm", "semidirect", "family")

# Family name -> (required integer params, optional integer params with defaults, string params)
FAMILIES: Dict[str, Tuple[Tuple[str, ...], Dict[str, int], Tuple[str, ...]]] = {
    "example1": (("p",), {"copies": 1}, ("K",)),
    "example2": (("m", "k"), {}, ()),
    "example3": (("p",), {"n": 1}, ()),
    "example4_a5": ((), {}, ()),
    "negative_frobenius_sl23": ((), {"p": 7}, ()),
}


@dataclass
class GroupSpec:
    """A validated group spec; build() constructs the group"""
    name: str
    kind: str
    degree: Optional[int] = None
    generators: List[str] = field(default_factory=list)
    modulus: Optional[int] = None
    dim: Optional[int] = None
    acting: Optional["GroupSpec"] = None
    matrices: List[List[List[int]]] = field(default_factory=list)
    family: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def build(self) -> PermGroup:
        from cn_groups import constructors

        if self.kind == "perm":
            perms = [Permutation.parse(text, self.degree) for text in self.generators]
            return PermGroup(self.degree, perms, name=self.name)
        if self.kind == "semidirect":
            K = self.acting.build()
            action = constructors.MatrixAction(self.dim, self.modulus, tuple(self.matrices))
            return constructors.build_semidirect(action, K, name=self.name).group

        params = dict(self.params)
        if self.family == "example1":
            group = constructors.example1(constructors.group_from_name(params["K"]), params["p"],
                                          params.get("copies", 1))
        elif self.family == "example2":
            group = constructors.example2(params["m"], params["k"])
        elif self.family == "example3":
            group = constructors.example3(params["p"], params.get("n", 1)).group
        elif self.family == "example4_a5":
            group = constructors.example4_a5()
        else:
            group = constructors.negative_frobenius_sl23(params.get("p", 7))
        group.name = self.name
        return group

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "kind": self.kind}
        if self.kind == "perm":
            data["degree"] = self.degree
            data["generators"] = list(self.generators)
        elif self.kind == "semidirect":
            data["modulus"] = self.modulus
            data["dim"] = self.dim
            data["acting"] = self.acting.to_dict()
            data["matrices"] = self.matrices
        else:
            data["family"] = self.family
            data["params"] = dict(self.params)
        return data


def spec_from_group(G: PermGroup, name: Optional[str] = None) -> GroupSpec:
    """Perm-kind spec of an already built group"""
    return GroupSpec(
        name=name or G.name or "G",
        kind="perm",
        degree=G.degree,
        generators=[g.cycle_string() for g in G.generators],
    )


def _require(data: Dict[str, Any], key: str, kind: type, prefix: str = "") -> Any:
    label = prefix + key
    if key not in data:
        raise SpecError("missing required field", label)
    value = data[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SpecError(f"expected an integer, got {value!r}", label)
    if kind is not int and not isinstance(value, kind):
        raise SpecError(f"expected {kind.__name__}, got {type(value).__name__}", label)
    return value


def _parse_object(data: Any, prefix: str = "") -> GroupSpec:
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object", prefix.rstrip(".") or None)
    name = _require(data, "name", str, prefix)
    kind = _require(data, "kind", str, prefix)
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}", prefix + "kind")

    if kind == "perm":
        degree = _require(data, "degree", int, prefix)
        if degree < 1:
            raise SpecError("degree must be positive", prefix + "degree")
        generators = _require(data, "generators", list, prefix)
        for index, text in enumerate(generators):
            if not isinstance(text, str):
                raise SpecError("generators are cycle strings", f"{prefix}generators[{index}]")
            # Parse eagerly so syntax and degree errors surface here
            Permutation.parse(text, degree)
        return GroupSpec(name=name, kind=kind, degree=degree, generators=list(generators))

    if kind == "semidirect":
        modulus = _require(data, "modulus", int, prefix)
        dim = _require(data, "dim", int, prefix)
        if modulus < 2:
            raise SpecError("modulus must be at least 2", prefix + "modulus")
        if dim < 1:
            raise SpecError("dim must be positive", prefix + "dim")
        acting = _parse_object(_require(data, "acting", dict, prefix), prefix + "acting.")
        matrices = _require(data, "matrices", list, prefix)
        for index, M in enumerate(matrices):
            ok = (isinstance(M, list) and len(M) == dim
                  and all(isinstance(row, list) and len(row) == dim
                          and all(isinstance(x, int) for x in row) for row in M))
            if not ok:
                raise SpecError(f"expected a {dim}x{dim} integer matrix", f"{prefix}matrices[{index}]")
        if len(matrices) != len(acting.build().generators):
            raise SpecError("one matrix per generator of the acting group is required", prefix + "matrices")
        return GroupSpec(name=name, kind=kind, modulus=modulus, dim=dim, acting=acting, matrices=matrices)

    family = _require(data, "family", str, prefix)
    if family not in FAMILIES:
        raise SpecError(f"unknown family {family!r}", prefix + "family")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise SpecError("params must be an object", prefix + "params")
    required, optional, strings = FAMILIES[family]
    parsed: Dict[str, Any] = {}
    for key in required:
        parsed[key] = _require(params, key, int, prefix + "params.")
    for key, default in optional.items():
        parsed[key] = _require(params, key, int, prefix + "params.") if key in params else default
    for key in strings:
        parsed[key] = _require(params, key, str, prefix + "params.")
    unknown = set(params) - set(parsed)
    if unknown:
        raise SpecError(f"unknown parameters {sorted(unknown)}", prefix + "params")
    return GroupSpec(name=name, kind=kind, family=family, params=parsed)


def parse_spec(document: Union[str, bytes, Dict[str, Any]]) -> GroupSpec:
    """Validate a JSON spec document (text or already decoded)"""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    else:
        data = document
    return _parse_object(data)


@dataclass
class SpecFile:
    """A parsed spec file"""
    path: Path
    spec: GroupSpec
    file_hash: str


@dataclass
class SpecFailure:
    """A spec file that could not be parsed"""
    path: Path
    error: str
    kind: str

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.path.stem, "error": self.error, "kind": self.kind}


class SpecParser:
    """Parser for spec files with a hash-keyed cache"""

    def __init__(self):
        self._file_cache: Dict[str, SpecFile] = {}

    def parse_file(self, file_path: Path) -> SpecFile:
        with open(file_path, "rb") as f:
            raw = f.read()
        file_hash = hashlib.md5(raw).hexdigest()

        cache_key = str(file_path)
        cached = self._file_cache.get(cache_key)
        if cached is not None and cached.file_hash == file_hash:
            return cached

        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SpecError(f"{file_path.name} is not UTF-8: {e}")
        spec_file = SpecFile(path=file_path, spec=parse_spec(text), file_hash=file_hash)
        self._file_cache[cache_key] = spec_file
        return spec_file

    def scan_directory(self, spec_dir: Path) -> Tuple[List[GroupSpec], List[SpecFailure]]:
        """Every parseable *.json spec in the directory, plus per-file failures"""
        specs: List[GroupSpec] = []
        failures: List[SpecFailure] = []
        if not spec_dir.exists():
            return specs, failures

        for file_path in sorted(spec_dir.glob("*.json")):
            try:
                specs.append(self.parse_file(file_path).spec)
            except (CNGroupsError, OSError) as e:
                # Log error but continue with other files
                logger.error(f"Failed to parse spec file {file_path}: {e}")
                failures.append(SpecFailure(file_path, str(e), e.__class__.__name__))
        return specs, failures

    def clear_cache(self):
        self._file_cache.clear()
