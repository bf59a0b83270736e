"""Problem files: JSON descriptions of a base monoid, a total monoid and the
structure map, validated against ``schema/problem.schema.json``."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from json.decoder import JSONDecodeError, scanstring
from typing import Any, Optional, Union

import jsonschema
from sympy import isprime

from .exactlin import FgAbelianGroup
from .homs import MonoidHom, RelativePresentation
from .monoid import AffineMonoid, PresentedMonoid

Path = tuple[Union[str, int], ...]


class ProblemError(ValueError):
    """Input error with one diagnostic per offending field."""

    def __init__(self, diagnostics: list[str]):
        super().__init__("\n".join(diagnostics))
        self.diagnostics = diagnostics


def load_schema() -> dict:
    text = resources.files("semistab").joinpath("schema/problem.schema.json").read_text()
    return json.loads(text)


# ---- source positions ----------------------------------------------------------------------


def locate(text: str) -> dict[Path, tuple[int, int]]:
    """Map every JSON path in ``text`` to the (line, column) where its value starts."""
    out: dict[Path, tuple[int, int]] = {}
    decoder = json.JSONDecoder()
    n = len(text)

    def skip(i: int) -> int:
        while i < n and text[i] in " \t\r\n":
            i += 1
        return i

    def pos(i: int) -> tuple[int, int]:
        line = text.count("\n", 0, i) + 1
        return line, i - (text.rfind("\n", 0, i) + 1) + 1

    def value(i: int, path: Path) -> int:
        i = skip(i)
        out[path] = pos(i)
        if i < n and text[i] == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = scanstring(text, skip(i) + 1)
                i = skip(i)
                i = value(i + 1, path + (key,))  # past ':'
                i = skip(i)
                if text[i] == "}":
                    return i + 1
                i += 1  # ','
        if i < n and text[i] == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = skip(value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        _, end = decoder.raw_decode(text, i)
        return end

    try:
        value(0, ())
    except (JSONDecodeError, IndexError, ValueError):
        pass
    return out


def _where(positions: dict[Path, tuple[int, int]], path: Path) -> str:
    p = tuple(path)
    while p and p not in positions:
        p = p[:-1]
    line, col = positions.get(p, (1, 1))
    field_name = "/".join(str(x) for x in path) or "<root>"
    return f"line {line}, column {col}: field '{field_name}'"


# ---- the problem -----------------------------------------------------------------------------


@dataclass
class Problem:
    base: AffineMonoid
    total: Union[AffineMonoid, PresentedMonoid, RelativePresentation]
    images: Optional[list[list[int]]]
    char: int = 0
    label: Optional[str] = None
    expected: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def hom(self) -> MonoidHom:
        if isinstance(self.total, RelativePresentation):
            return self.total.to_hom()
        return MonoidHom(self.base, self.total, self.images)


def _affine(d: dict) -> AffineMonoid:
    return AffineMonoid(FgAbelianGroup(d["rank"], tuple(d.get("torsion", ()))), d["generators"])


def _semantic_checks(data: dict) -> list[tuple[Path, str]]:
    errs: list[tuple[Path, str]] = []

    def affine_dims(d: dict, where: Path) -> int:
        dim = d["rank"] + len(d.get("torsion", []))
        for k, g in enumerate(d["generators"]):
            if len(g) != dim:
                errs.append((where + ("generators", k), f"expected {dim} coordinates, got {len(g)}"))
        return dim

    char = data.get("char", 0)
    if char and not isprime(char):
        errs.append((("char",), f"characteristic {char} is neither 0 nor a prime"))
    base = data["base"]
    affine_dims(base, ("base",))
    m = len(base["generators"])
    total = data["total"]
    images = data["hom"].get("images")
    kind = total["kind"]
    if kind == "relative":
        r = total["extra_generators"]
        for k, rel in enumerate(total["relations"]):
            for side in ("lhs", "rhs"):
                if len(rel[side]["base"]) != m:
                    errs.append((("total", "relations", k, side, "base"), f"expected {m} entries, got {len(rel[side]['base'])}"))
                if len(rel[side]["extra"]) != r:
                    errs.append((("total", "relations", k, side, "extra"), f"expected {r} entries, got {len(rel[side]['extra'])}"))
                if any(x < 0 for x in rel[side]["base"] + rel[side]["extra"]):
                    errs.append((("total", "relations", k, side), "exponents must be nonnegative"))
        if images is not None:
            errs.append((("hom", "images"), "a relative presentation fixes the map; omit images"))
        return errs
    if kind == "affine":
        dim = affine_dims(total, ("total",))
    else:
        dim = total["ngens"]
        for k, (lhs, rhs) in enumerate(total["relations"]):
            for s, v in ((0, lhs), (1, rhs)):
                if len(v) != dim:
                    errs.append((("total", "relations", k, s), f"expected {dim} entries, got {len(v)}"))
                elif any(x < 0 for x in v):
                    errs.append((("total", "relations", k, s), "exponents must be nonnegative"))
    if images is None:
        errs.append((("hom", "images"), "images of the base generators are required"))
        return errs
    if len(images) != m:
        errs.append((("hom", "images"), f"expected {m} images, got {len(images)}"))
    for k, v in enumerate(images):
        if len(v) != dim:
            errs.append((("hom", "images", k), f"expected {dim} entries, got {len(v)}"))
    return errs


def parse_problem(text: str, overrides: Optional[dict] = None) -> Problem:
    """Parse and validate; raise :class:`ProblemError` with line/field diagnostics."""
    try:
        data = json.loads(text)
    except JSONDecodeError as exc:
        raise ProblemError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    positions = locate(text)
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        errors = [leaf for e in errors for leaf in _leaf_errors(e)]
        raise ProblemError([f"{_where(positions, tuple(e.absolute_path))}: {_schema_message(e)}" for e in errors])
    sem = _semantic_checks(data)
    if sem:
        raise ProblemError([f"{_where(positions, p)}: {msg}" for p, msg in sem])
    options = dict(data.get("options", {}))
    char = data.get("char", 0)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key == "char":
            if val < 0 or (val and not isprime(val)):
                raise ProblemError([f"--char {val}: characteristic must be 0 or a prime"])
            char = val
        else:
            options[key] = val
    base = _affine(data["base"])
    total_d = data["total"]
    if total_d["kind"] == "affine":
        total: Any = _affine(total_d)
    elif total_d["kind"] == "presented":
        total = PresentedMonoid(total_d["ngens"], [(tuple(a), tuple(b)) for a, b in total_d["relations"]])
    else:
        rels = tuple(
            ((tuple(x["lhs"]["base"]), tuple(x["lhs"]["extra"])), (tuple(x["rhs"]["base"]), tuple(x["rhs"]["extra"])))
            for x in total_d["relations"]
        )
        total = RelativePresentation(base, total_d["extra_generators"], rels)
    return Problem(
        base=base,
        total=total,
        images=data["hom"].get("images"),
        char=char,
        label=data.get("label"),
        expected=data.get("expected", {}),
        options=options,
        raw=data,
    )


def _leaf_errors(err: jsonschema.ValidationError) -> list[jsonschema.ValidationError]:
    """For a ``oneOf`` on a tagged object, the errors of the branch named by ``kind``."""
    if err.validator != "oneOf" or not isinstance(err.instance, dict) or "kind" not in err.instance:
        return [err]
    by_branch: dict[int, list] = {}
    for e in err.context:
        by_branch.setdefault(e.relative_schema_path[0], []).append(e)
    for branch in by_branch.values():
        if not any(list(e.relative_path) == ["kind"] and e.validator == "const" for e in branch):
            return sorted(branch, key=lambda e: list(map(str, e.absolute_path)))
    return [err]


def _schema_message(err: jsonschema.ValidationError) -> str:
    if err.validator == "oneOf":
        return "does not match any of the affine, presented or relative monoid shapes"
    return err.message


def load_problem(path: str, overrides: Optional[dict] = None) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), overrides)
