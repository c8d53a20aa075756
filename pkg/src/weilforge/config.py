"""Experiment configs: presets or explicit tensors, with exact rational parsing."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from . import constructions as C
from .structures import DoubleAlgebroidInput, StructureData
from .weil_core import Role, Shape


class ConfigError(ValueError):
    """Malformed config; message starts with the location of the problem."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


_RATIONAL = re.compile(r"^\s*[-+]?\d+\s*(/\s*\d+\s*)?$")


def parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(where, "booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise ConfigError(where, f"zero denominator in {value!r}") from None
    raise ConfigError(where, f"expected an integer or a 'p/q' string, got {value!r}")


def parse_array(value: Any, depth: int, where: str):
    if depth == 0:
        return parse_rational(value, where)
    if not isinstance(value, list):
        raise ConfigError(where, f"expected a nested list of depth {depth}")
    return [parse_array(v, depth - 1, f"{where}[{i}]") for i, v in enumerate(value)]


def _int(value: Any, where: str, lo: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise ConfigError(where, f"expected an integer ≥ {lo}, got {value!r}")
    return value


def _mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(where, "expected a mapping")
    return value


@dataclass
class Problem:
    """A parsed config: either a double input or a single structure data."""

    double: DoubleAlgebroidInput | None
    single: StructureData | None
    description: str
    digest: str

    @property
    def data(self) -> list[tuple[str, StructureData]]:
        if self.double is not None:
            return [("dataH", self.double.data_h), ("dataV", self.double.data_v)]
        return [("data", self.single)]

    @property
    def shape(self) -> Shape:
        return self.double.shape if self.double is not None else self.single.shape


def digest_of(raw: Any) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise ConfigError(loc, f"YAML syntax error: {getattr(exc, 'problem', exc)}") from None
    return parse_config(raw)


def parse_config(raw: Any) -> Problem:
    raw = _mapping(raw, "config")
    digest = digest_of(raw)
    has_preset, has_shape = "preset" in raw, "shape" in raw
    if has_preset == has_shape:
        raise ConfigError("config", "exactly one of 'preset' or 'shape' (explicit tensors) is required")
    if has_preset:
        return _parse_preset(_mapping(raw["preset"], "preset"), digest)
    return _parse_explicit(raw, digest)


def _parse_shape(value: Any, where: str) -> Shape:
    m = _mapping(value, where)
    try:
        return Shape(*(_int(m.get(k), f"{where}.{k}") for k in ("nA", "nB", "nE")))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(where, str(exc)) from None


def parse_structure_data(value: Any, shape: Shape, role: Role, where: str) -> StructureData:
    """Missing tensors default to zero."""
    m = _mapping(value if value is not None else {}, where)
    unknown = set(m) - {"bracket", "rep_first", "rep_second", "pairing", "role"}
    if unknown:
        raise ConfigError(where, f"unknown keys {sorted(unknown)}")
    zero = StructureData.zero(shape, role)
    fields = {}
    for key, depth in (("bracket", 3), ("rep_first", 3), ("rep_second", 3), ("pairing", 2)):
        fields[key] = parse_array(m[key], depth, f"{where}.{key}") if key in m else getattr(zero, key)
    try:
        return StructureData(shape, role, **fields)
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None


def _parse_explicit(raw: dict, digest: str) -> Problem:
    shape = _parse_shape(raw["shape"], "shape")
    if "data" in raw:
        role = _role(raw.get("role", "D"), "role")
        data = parse_structure_data(raw["data"], shape, role, "data")
        return Problem(None, data, f"explicit structure data, role {role.label}", digest)
    if "dataH" not in raw and "dataV" not in raw:
        raise ConfigError("config", "explicit configs need 'dataH' and 'dataV' (or a single 'data')")
    dh = parse_structure_data(raw.get("dataH"), shape, Role.Dprime, "dataH")
    dv = parse_structure_data(raw.get("dataV"), shape, Role.Dprimeprime, "dataV")
    return Problem(DoubleAlgebroidInput(shape, dh, dv), None, "explicit double input", digest)


def _role(value: Any, where: str) -> Role:
    try:
        return Role.parse(str(value))
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None


def _lie(value: Any, where: str) -> C.LieAlgebraData:
    if isinstance(value, str):
        try:
            return C.lie_algebra_by_name(value)
        except ValueError as exc:
            raise ConfigError(where, str(exc)) from None
    m = _mapping(value, where)
    dim = _int(m.get("dim"), f"{where}.dim")
    c = parse_array(m.get("c", [[[0] * dim] * dim] * dim), 3, f"{where}.c") if dim else []
    try:
        g = C.LieAlgebraData(dim, c)
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None
    return g


def _lie_valid(value: Any, where: str) -> C.LieAlgebraData:
    g = _lie(value, where)
    bad = g.defects()
    if bad:
        raise InvalidConfigData(where, "; ".join(bad[:3]))
    return g


class InvalidConfigData(ValueError):
    """Config parses but describes data violating an axiom (exit code 2)."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")


def _parse_preset(p: dict, digest: str) -> Problem:
    kind = p.get("kind")
    params = _mapping(p.get("params", {}), "preset.params")
    where = "preset.params"
    if kind == "tangent_lie_algebra":
        g = _lie_valid(params.get("algebra", "sl2"), f"{where}.algebra")
        return Problem(C.tangent_double(g), None, f"tangent double of a {g.dim}-dim Lie algebra", digest)
    if kind == "matched_pair":
        mp = _matched_pair(params, where)
        for name, alg in (("A", mp.alg_a), ("B", mp.alg_b)):
            bad = alg.defects()
            if bad:
                raise InvalidConfigData(f"{where}.{name}", "; ".join(bad[:3]))
        return Problem(C.matched_pair(mp), None, "matched pair", digest)
    if kind == "vacant_pairing":
        nA, nB = _int(params.get("nA"), f"{where}.nA"), _int(params.get("nB"), f"{where}.nB")
        P = parse_array(params.get("P", [[0] * nB for _ in range(nA)]), 2, f"{where}.P")
        if len(P) != nA or any(len(r) != nB for r in P):
            raise ConfigError(f"{where}.P", f"expected a {nA}x{nB} matrix")
        Shape(nA, nB, 0)
        return Problem(None, C.vacant_pairing(nA, nB, P), "pairing on a vacant double vector space", digest)
    if kind == "semidirect":
        nB = _int(params.get("nB"), f"{where}.nB")
        g = _lie_valid(params.get("algebra", "abelian1"), f"{where}.algebra")
        rep = parse_array(params.get("rep", [[[0] * nB] * nB] * g.dim), 3, f"{where}.rep")
        try:
            data = C.semidirect(nB, g, rep)
        except ValueError as exc:
            raise InvalidConfigData(f"{where}.rep", str(exc)) from None
        return Problem(None, data, "semidirect product", digest)
    raise ConfigError("preset.kind", f"unknown preset kind {kind!r}")


def _matched_pair(params: dict, where: str) -> C.MatchedPairData:
    if "ambient" in params:
        g = _lie_valid(params["ambient"], f"{where}.ambient")
        first = params.get("first")
        second = params.get("second")
        if not isinstance(first, list) or not isinstance(second, list):
            raise ConfigError(where, "'first' and 'second' index lists are required with 'ambient'")
        try:
            mp = C.matched_pair_from_splitting(g, [_int(i, f"{where}.first") for i in first],
                                               [_int(i, f"{where}.second") for i in second])
        except ValueError as exc:
            raise InvalidConfigData(where, str(exc)) from None
    else:
        A = _lie(params.get("A"), f"{where}.A")
        B = _lie(params.get("B"), f"{where}.B")
        try:
            mp = C.MatchedPairData(A, B, parse_array(params.get("action_a_on_b"), 3, f"{where}.action_a_on_b"),
                                   parse_array(params.get("action_b_on_a"), 3, f"{where}.action_b_on_a"))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(where, str(exc)) from None
    for i, mut in enumerate(params.get("mutations", []) or []):
        w = f"{where}.mutations[{i}]"
        mut = _mapping(mut, w)
        which = mut.get("action")
        if which not in ("a_on_b", "b_on_a"):
            raise ConfigError(f"{w}.action", "expected 'a_on_b' or 'b_on_a'")
        idx = mut.get("index")
        if not isinstance(idx, list) or len(idx) != 3:
            raise ConfigError(f"{w}.index", "expected three indices")
        try:
            mp = mp.mutated(which, tuple(_int(v, f"{w}.index") for v in idx),
                            parse_rational(mut.get("delta", 1), f"{w}.delta"))
        except IndexError:
            raise ConfigError(f"{w}.index", "index out of range") from None
    return mp
