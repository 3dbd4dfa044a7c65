"""
Plain-text rendering of CLI results.

Each command result (the same dict that goes into the JSON envelope) is laid
out as a list of sections: a title line followed by indented key/value rows.
"""

from collections.abc import Callable
from typing import Any

Section = tuple[str, list[str]]


def _vector(v: list[int] | None) -> str:
    if v is None:
        return "-"
    return "(" + ",".join(str(x) for x in v) + ")"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _rows(pairs: list[tuple[str, Any]]) -> list[str]:
    width = max((len(k) for k, _ in pairs), default=0)
    return [f"  {k.ljust(width)}  {v}" for k, v in pairs]


def _euler(result: dict[str, Any]) -> list[Section]:
    title = f"<{_vector(result['dim'])}, {_vector(result['other'])}> = {result['euler']}"
    return [(title, _rows([("Tits form q(dim)", result["tits_form"])]))]


def _classify(result: dict[str, Any]) -> list[Section]:
    return [
        (
            result["description"],
            _rows(
                [
                    ("dimension vector", _vector(result["dim"])),
                    ("<b,b>", result["euler"]),
                    ("generic end dim", result["generic_end_dim"]),
                ]
            ),
        )
    ]


def _decompose(result: dict[str, Any]) -> list[Section]:
    parts = result["parts"]
    shown = " + ".join(_vector(p) for p in parts) if parts else "0"
    cert = result["certificate"]
    rows = [
        ("certified", f"{_yes(cert['passed'])} ({cert['reason']})"),
        ("attempts", result["attempts"]),
        ("classes", ", ".join(result["classes"]) or "-"),
    ]
    if result["caveat"]:
        rows.append(("caveat", result["caveat"]))
    sections: list[Section] = [(f"{_vector(result['dim'])} = {shown}", _rows(rows))]
    if result["notes"]:
        sections.append(("Notes", [f"  - {n}" for n in result["notes"]]))
    return sections


def _report(result: dict[str, Any]) -> list[Section]:
    rows = [
        ("prehomogeneous", _yes(result["prehomogeneous"])),
        ("almost prehomogeneous", _yes(result["almost_prehomogeneous"])),
        ("isotropic part", _vector(result["isotropic_part"])),
        ("generic orbit codim", result["generic_orbit_codim"]),
        ("parts", " + ".join(_vector(p) for p in result["parts"]) or "0"),
        ("classes", ", ".join(result["classes"]) or "-"),
    ]
    return [(f"SI ring conclusion: {result['conclusion']}", _rows(rows))]


def _si_weights(result: dict[str, Any]) -> list[Section]:
    mw = result["minimal_weight"]
    sections: list[Section] = [
        (
            f"chi = {_vector(mw['chi'])}",
            _rows(
                [
                    ("monomials", ", ".join(mw["monomials"])),
                    ("count", mw["count"]),
                    ("codim", mw["codim"]),
                    ("unique in box", f"{_yes(mw['unique_in_box'])} (box {mw['box']})"),
                ]
            ),
        )
    ]
    dims = [
        (f"dim SI_{d['multiple']}chi", f"{d['symbolic']} (predicted {d['predicted']})")
        for d in result["dims"]
    ]
    sections.append(("Weight spaces", _rows(dims)))
    mf = result["multiplicity"]
    checks = [
        ("jacobian rank", f"{result['jacobian_rank']} of {result['relations']} relations"),
        ("multiplicity free", f"{_yes(mf['multiplicity_free'])} (witness {_vector(mf['witness'])})"),
        ("coprime chi pairs", f"{sum(p['coprime'] for p in result['pairs'])}/{len(result['pairs'])}"),
    ]
    sections.append(("Checks", _rows(checks)))
    if "weight" in result:
        w = result["weight"]
        sections.append(
            (
                f"sigma = {_vector(w['sigma'])}",
                _rows(
                    [
                        ("dim SI_sigma", w["dim"]),
                        ("n", w["remainder"]["n"] if w["remainder"] else "-"),
                        ("predicted", w["remainder"]["predicted_dim"] if w["remainder"] else "-"),
                    ]
                ),
            )
        )
    return sections


def _verify_example(result: dict[str, Any]) -> list[Section]:
    lines = []
    for c in result["claims"]:
        mark = "PASS" if c["passed"] else "FAIL"
        lines.append(f"  [{mark}] {c['name']}: {c['description']}")
        if not c["passed"]:
            lines.append(f"         expected {c['expected']}, computed {c['computed']}")
    verdict = "all claims pass" if result["passed"] else "some claims FAIL"
    return [(f"{result['fixture']} (seed {result['seed']}): {verdict}", lines)]


def _orbit(result: dict[str, Any]) -> list[Section]:
    rows = [
        ("dim GL", result["gl_dim"]),
        ("end dim", result["end_dim"]),
        ("orbit dim", result["orbit_dim"]),
        ("brick", _yes(result["is_brick"])),
        ("satisfies relations", _yes(result["relations_hold"])),
    ]
    if result["codim"] is not None:
        rows.append(("orbit codim", result["codim"]))
    return [(f"Orbit of a point of dimension {_vector(result['dim'])}", _rows(rows))]


def _export(result: dict[str, Any]) -> list[Section]:
    return [(f"Exported {result['fixture']}", [f"  {p}" for p in result["written"]])]


RENDERERS: dict[str, Callable[[dict[str, Any]], list[Section]]] = {
    "euler": _euler,
    "classify": _classify,
    "decompose": _decompose,
    "report": _report,
    "si-weights": _si_weights,
    "verify-example": _verify_example,
    "orbit": _orbit,
    "export-fixture": _export,
}


def render(command: str, result: dict[str, Any]) -> str:
    """Human-readable text for a command result."""
    blocks = []
    for title, lines in RENDERERS[command](result):
        blocks.append("\n".join([title, *lines]))
    return "\n\n".join(blocks)
