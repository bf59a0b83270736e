"""JSON encoding of results. Reports are written with sorted keys and no
timing unless asked, so reruns are byte-identical."""
from __future__ import annotations

import json
from importlib import metadata
from typing import Any, Optional

from .exactlin import FgAbelianGroup, GroupElement
from .homs import ChartClassification, MonoidHom, SemistableCertificate, check_certificate
from .monoid import AffineMonoid
from .ringmodel.binomial import BinomialFactorization, RelativeBinomialIdeal


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def element_to_json(x: GroupElement) -> list[int]:
    return list(x.coords)


def monoid_to_json(m: AffineMonoid) -> dict:
    return {
        "kind": "affine",
        "rank": m.ambient.free_rank,
        "torsion": list(m.ambient.torsion),
        "generators": [element_to_json(g) for g in m.generators],
    }


def monoid_from_json(d: dict) -> AffineMonoid:
    return AffineMonoid(FgAbelianGroup(d["rank"], tuple(d.get("torsion", ()))), d["generators"])


def hom_to_json(f: MonoidHom) -> dict:
    return {
        "base": monoid_to_json(f.source),
        "total": monoid_to_json(f.target),
        "images": [element_to_json(x) for x in f.images],
    }


def hom_from_json(d: dict) -> MonoidHom:
    return MonoidHom(monoid_from_json(d["base"]), monoid_from_json(d["total"]), d["images"])


def certificate_to_json(cert: SemistableCertificate, f: MonoidHom) -> dict:
    """Self-contained: carries the affine models of both monoids and the map."""
    return {
        "r": cert.r,
        "l": cert.l,
        "perm": list(cert.perm),
        "q0": element_to_json(cert.q0),
        "B": list(cert.B),
        "p": [element_to_json(x) for x in cert.p],
        "hom": hom_to_json(f),
    }


def certificate_from_json(d: dict) -> tuple[MonoidHom, SemistableCertificate]:
    f = hom_from_json(d["hom"])
    cert = SemistableCertificate(
        r=d["r"],
        l=d["l"],
        perm=tuple(d["perm"]),
        q0=f.source.ambient.element(d["q0"]),
        B=tuple(d["B"]),
        p=tuple(f.target.ambient.element(x) for x in d["p"]),
    )
    return f, cert


def recheck_certificate(d: dict) -> bool:
    """Rebuild the monoids from a serialized certificate and re-verify it."""
    f, cert = certificate_from_json(d)
    return check_certificate(f, cert)


def ideal_to_json(ideal: RelativeBinomialIdeal) -> dict:
    return {
        "nvars": ideal.nvars,
        "text": str(ideal),
        "monomials": [list(m) for m in ideal.pure],
        "binomials": [[list(i), list(j)] for i, j in ideal.binomials],
    }


def factorization_to_json(fz: BinomialFactorization) -> dict:
    return {
        "I0": list(fz.I0),
        "J0": list(fz.J0),
        "g": fz.g,
        "I0_primitive": list(fz.I0p),
        "J0_primitive": list(fz.J0p),
        "factors": [{"lhs": list(i), "rhs": list(j), "root_index": k} for i, j, k in fz.factors],
        "distinct_factors": fz.distinct_factors,
        "factor_multiplicity": fz.multiplicity,
        "root_ring": fz.root_field,
        "reduced": fz.reduced,
        "char": fz.char,
        "verified": fz.verify(),
    }


def classification_to_json(c: ChartClassification, f: MonoidHom) -> dict:
    out: dict[str, Any] = {
        "variant": c.variant,
        "multiplicity": c.multiplicity,
        "torsion": {"order": c.torsion_order, "invertible": c.torsion_ok},
        "saturation_violation": c.saturation_violation,
    }
    if c.r is not None:
        out["r"] = c.r
    if c.reason:
        out["reason"] = c.reason
    if c.quadric:
        out["quadric"] = list(c.quadric)
    if c.certificate is not None:
        out["certificate"] = certificate_to_json(c.certificate, f)
    return out


def make_report(command: str, results: dict, degree: Optional[int] = None, timing: Optional[float] = None) -> dict:
    rep: dict[str, Any] = {"tool": {"name": "semistab", "version": tool_version()}, "command": command, "results": results}
    if degree is not None:
        rep["certified_degree"] = degree
    if timing is not None:
        rep["timing_seconds"] = round(timing, 6)
    return rep


def dumps(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines: list[str] = []

    def walk(x, prefix: str):
        if isinstance(x, dict):
            for k in sorted(x):
                walk(x[k], f"{prefix}.{k}" if prefix else str(k))
        elif isinstance(x, list) and any(isinstance(y, (dict, list)) for y in x):
            for k, y in enumerate(x):
                walk(y, f"{prefix}[{k}]")
        else:
            lines.append(f"{prefix}: {json.dumps(x)}")

    walk(report, "")
    return "\n".join(lines) + "\n"
