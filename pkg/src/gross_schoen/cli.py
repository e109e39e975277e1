"""Command-line front end.

Exit codes: 0 success, 1 domain error or failed verification, 2 parse/usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import cycle_cohomology as cc
from . import height_formulas as hf
from . import hodge_linalg as hl
from . import metric_graph as mg
from .spectral_phi import SpectralDatum, SpectralDataset, SpectralError, phi_spectral

__all__ = [
    "ParseError",
    "RunReport",
    "parse_graph_document",
    "parse_graph_file",
    "serialize_graph",
    "parse_spectral_document",
    "parse_height_document",
    "run",
    "main",
]


class ParseError(ValueError):
    """Schema violation, located by a JSON pointer."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        self.path = _pointer_to_path(pointer)
        super().__init__(f"{self.path or '<root>'}: {message}")


def _pointer_to_path(pointer: str) -> str:
    out = ""
    for part in pointer.split("/")[1:]:
        out += f"[{part}]" if part.isdigit() else (f".{part}" if out else part)
    return out


def exact(x) -> dict[str, Any]:
    """Render a number as an exact string plus an advisory float."""
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator), "float": float(x)}
    return {"float": float(x)}


def _rational(value, pointer: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ParseError(pointer, "expected a rational as 'p/q' or a decimal string")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(pointer, f"not a rational number: {value!r}") from None


def _number(value, pointer: str):
    """Rational when given as string or int, float when given as a JSON float."""
    if isinstance(value, float):
        return value
    return _rational(value, pointer)


def _field(obj: dict, key: str, pointer: str):
    if not isinstance(obj, dict):
        raise ParseError(pointer, "expected an object")
    if key not in obj:
        raise ParseError(f"{pointer}/{key}", "missing field")
    return obj[key]


def _list(value, pointer: str) -> list:
    if not isinstance(value, list):
        raise ParseError(pointer, "expected a list")
    return value


# --- graph files -------------------------------------------------------------


def parse_graph_document(doc) -> mg.MetrizedGraph:
    vertices = []
    seen: set[str] = set()
    for k, v in enumerate(_list(_field(doc, "vertices", ""), "/vertices")):
        ptr = f"/vertices/{k}"
        vid = _field(v, "id", ptr)
        if not isinstance(vid, str) or not vid:
            raise ParseError(f"{ptr}/id", "vertex id must be a non-empty string")
        if vid in seen:
            raise ParseError(f"{ptr}/id", f"duplicate vertex id {vid!r}")
        seen.add(vid)
        genus = v.get("genus", 0)
        if isinstance(genus, bool) or not isinstance(genus, int) or genus < 0:
            raise ParseError(f"{ptr}/genus", "genus must be a non-negative integer")
        vertices.append(mg.Vertex(vid, genus))
    if not vertices:
        raise ParseError("/vertices", "graph has no vertices")
    edges = []
    for k, e in enumerate(_list(doc.get("edges", []), "/edges")):
        ptr = f"/edges/{k}"
        ends = []
        for end in ("u", "v"):
            x = _field(e, end, ptr)
            if x not in seen:
                raise ParseError(f"{ptr}/{end}", f"unknown vertex {x!r}")
            ends.append(x)
        length = _rational(_field(e, "length", ptr), f"{ptr}/length")
        if length <= 0:
            raise ParseError(f"{ptr}/length", "length must be positive")
        edges.append(mg.Edge(ends[0], ends[1], length))
    G = mg.MetrizedGraph(tuple(vertices), tuple(edges))
    if not G.is_connected():
        raise ParseError("/edges", "not connected")
    return G


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise ParseError("", str(exc)) from None


def parse_graph_file(path: str) -> mg.MetrizedGraph:
    return parse_graph_document(_load_json(path))


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_graph(G: mg.MetrizedGraph) -> dict:
    return {
        "vertices": [{"id": v.id, "genus": v.genus} for v in G.vertices],
        "edges": [{"u": e.u, "v": e.v, "length": _frac_str(e.length)} for e in G.edges],
    }


# --- spectral and height files -----------------------------------------------


def _complex(value, pointer: str) -> complex:
    if isinstance(value, dict):
        re = value.get("re", 0.0)
        im = value.get("im", 0.0)
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            raise ParseError(pointer, "re/im must be numbers")
        return complex(re, im)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ParseError(pointer, "expected {\"re\": .., \"im\": ..}")


def parse_spectral_document(doc) -> SpectralDataset:
    g = _field(doc, "genus", "")
    if not isinstance(g, int) or isinstance(g, bool):
        raise ParseError("/genus", "genus must be an integer")
    tail = doc.get("tail_bound", 0.0)
    if not isinstance(tail, (int, float)) or isinstance(tail, bool):
        raise ParseError("/tail_bound", "tail bound must be a number")
    modes = []
    for k, m in enumerate(_list(_field(doc, "modes", ""), "/modes")):
        ptr = f"/modes/{k}"
        lam = _field(m, "lambda", ptr)
        if not isinstance(lam, (int, float)) or isinstance(lam, bool):
            raise ParseError(f"{ptr}/lambda", "eigenvalue must be a number")
        rows = _list(_field(m, "pairing", ptr), f"{ptr}/pairing")
        M = [
            [_complex(x, f"{ptr}/pairing/{i}/{j}") for j, x in enumerate(_list(row, f"{ptr}/pairing/{i}"))]
            for i, row in enumerate(rows)
        ]
        try:
            modes.append(SpectralDatum(float(lam), M))
        except (SpectralError, ValueError) as exc:
            raise ParseError(f"{ptr}/pairing", str(exc)) from None
    try:
        return SpectralDataset(g, tuple(modes), float(tail))
    except SpectralError as exc:
        raise ParseError("", str(exc)) from None


def parse_height_document(doc) -> hf.HeightInputs:
    g = _field(doc, "genus", "")
    if not isinstance(g, int) or isinstance(g, bool):
        raise ParseError("/genus", "genus must be an integer")
    omega = _number(_field(doc, "omega_sq", ""), "/omega_sq")
    hxe = _number(_field(doc, "height_xe", ""), "/height_xe")
    places = []
    for k, p in enumerate(_list(doc.get("places", []), "/places")):
        ptr = f"/places/{k}"
        kind = _field(p, "kind", ptr)
        if kind not in {x.value for x in hf.PlaceKind}:
            raise ParseError(f"{ptr}/kind", f"unknown place kind {kind!r}")
        phi = _number(_field(p, "phi", ptr), f"{ptr}/phi")
        q = p.get("q")
        if kind == hf.PlaceKind.FINITE.value and (not isinstance(q, int) or isinstance(q, bool) or q < 2):
            raise ParseError(f"{ptr}/q", "finite places need an integer q >= 2")
        places.append(hf.PlaceData(hf.PlaceKind(kind), phi, q if kind == hf.PlaceKind.FINITE.value else None))
    return hf.HeightInputs(g, omega, hxe, tuple(places))


def parse_family_document(doc, g: int) -> list[Fraction]:
    if isinstance(doc, list):
        if len(doc) != g + 1:
            raise ParseError("", f"expected {g + 1} degrees")
        return [_rational(x, f"/{i}") for i, x in enumerate(doc)]
    psi = _rational(_field(doc, "psi", ""), "/psi")
    lam = _rational(_field(doc, "lambda", ""), "/lambda")
    delta = doc.get("delta", {})
    if not isinstance(delta, dict):
        raise ParseError("/delta", "expected an object keyed by boundary index")
    out = [psi, lam] + [Fraction(0)] * (g - 1)
    for key, val in delta.items():
        if not key.isdigit() or not 1 <= int(key) <= g - 1:
            raise ParseError(f"/delta/{key}", "boundary index out of range")
        out[1 + int(key)] = _rational(val, f"/delta/{key}")
    return out


# --- reports -------------------------------------------------------------------


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    results: Any = None
    verdicts: dict[str, bool] = field(default_factory=dict)
    timing: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "verdicts": self.verdicts,
            "timing": round(self.timing, 6),
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2)


def _digest(command: str, args: dict, blobs: Sequence[bytes] = ()) -> str:
    h = hashlib.sha256()
    h.update(json.dumps({"command": command, "args": args}, sort_keys=True, default=str).encode())
    for b in blobs:
        h.update(b)
    return h.hexdigest()


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return b""
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError:
        return b""


def _graph_result(path: str, oracle_segments: int | None = None) -> dict:
    G = parse_graph_file(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", mg.GenusOneWarning)
        phi = mg.phi_graph(G)
    mu = mg.admissible_measure(G)
    delta = G.total_length
    out = {
        "file": path,
        "total_genus": G.total_genus,
        "delta": exact(delta),
        "phi": exact(phi),
        "admissible_measure": {
            "atoms": {p: exact(m) for p, m in sorted(mu.atoms.items())},
            "densities": {str(k): exact(r) for k, r in sorted(mu.densities.items())},
        },
        "warnings": [str(w.message) for w in caught],
    }
    if G.total_genus >= 2:
        out["lambda"] = exact(mg.lambda_graph(G.total_genus, phi, delta))
    if oracle_segments:
        from .discretization import discretization_oracle

        res = discretization_oracle(G, oracle_segments)
        out["oracle"] = {"segments": oracle_segments, "phi": res.phi, "abs_error": abs(res.phi - float(phi))}
    return out


def _cmd_phi_graph(ns) -> RunReport:
    paths = ns.files
    if ns.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_graph_result, paths, [ns.oracle] * len(paths)))
    else:
        results = [_graph_result(p, ns.oracle) for p in paths]
    digest = _digest("phi-graph", {"files": paths, "oracle": ns.oracle}, [_read_bytes(p) for p in paths])
    return RunReport("phi-graph", digest, results)


def _cmd_phi_spectral(ns) -> RunReport:
    data = parse_spectral_document(_load_json(ns.file))
    value, tail = phi_spectral(data)
    res = {"phi": {"float": value}, "tail_bound": tail, "upper_bound": value + tail, "modes": len(data.modes)}
    return RunReport("phi-spectral", _digest("phi-spectral", {"file": ns.file}, [_read_bytes(ns.file)]), res)


def _cmd_height(ns) -> RunReport:
    inp = parse_height_document(_load_json(ns.input))
    val = hf.zhang_height(inp)
    res = {"genus": inp.genus, "height": exact(val)}
    return RunReport("height", _digest("height", {"input": ns.input}, [_read_bytes(ns.input)]), res)


def _cmd_picard(ns) -> RunReport:
    g = ns.genus
    c = hf.thmC_class(g)
    res: dict[str, Any] = {"class": str(c), "coefficients": c.to_json()}
    blobs = []
    if ns.family:
        degrees = parse_family_document(_load_json(ns.family), g)
        res["degree"] = exact(hf.degree_on_family(c, degrees))
        blobs.append(_read_bytes(ns.family))
    verdicts = {"biextension_identity": hf.verify_biextension_identity(g)}
    return RunReport("picard", _digest("picard", {"genus": g, "family": ns.family}, blobs), res, verdicts)


def _cmd_cohomology(ns) -> RunReport:
    g = ns.genus
    terms = cc.gross_schoen_terms(g)
    total = cc.gross_schoen_class(g)
    res = {
        "genus": g,
        "terms": {k: v.format() for k, v in terms.items()},
        "gross_schoen_class": total.format(),
        "diagonal_self_intersection": str(cc.intersection_degree(cc.diagonal_class(g) * cc.diagonal_class(g))),
    }
    return RunReport("cohomology", _digest("cohomology", {"genus": g}), res, {"cohomologically_trivial": total.is_zero()})


# --- verification suites --------------------------------------------------------


def _random_element(L: hl.SymplecticLattice, degree: int, rng: random.Random, span: int = 5) -> hl.ExteriorElement:
    import itertools

    keys = list(itertools.combinations(range(L.rank), degree))
    chosen = rng.sample(keys, min(len(keys), 8))
    return hl.ExteriorElement(degree, {k: rng.randint(-span, span) for k in chosen})


def verify_hodge(genus_values: Sequence[int], trials: int, seed: int = 0) -> dict[str, bool]:
    rng = random.Random(seed)
    out = {}
    for g in genus_values:
        L = hl.SymplecticLattice(g)
        ident = all(
            hl.contraction_c(L, hl.wedge_zeta(L, x)) == (g - 1) * x
            for x in (_random_element(L, 1, rng) for _ in range(trials))
        )
        polar = True
        for _ in range(trials):
            u, v = _random_element(L, 3, rng), _random_element(L, 3, rng)
            lhs = (g - 1) * hl.q_wedge3(L, u, v)
            rhs = hl.q_quotient(L, hl.projection_p(L, u), hl.projection_p(L, v)) + hl.q_h(
                L, hl.contraction_c(L, u), hl.contraction_c(L, v)
            )
            polar = polar and lhs == rhs
        out[f"hodge.g{g}.contraction_identity"] = ident
        out[f"hodge.g{g}.polarization_decomposition"] = polar
    return out


def verify_picard(gmax: int) -> dict[str, bool]:
    out = {}
    for g in range(2, gmax + 1):
        c = hf.thmC_class(g)
        expected = hf.PicardClass.build(g, 6 * g, 12, {g - i: -6 * i for i in range(1, g)})
        out[f"picard.g{g}.biextension_identity"] = hf.verify_biextension_identity(g)
        out[f"picard.g{g}.thmC"] = c == expected
        out[f"picard.g{g}.divisible_by_6"] = all(x.denominator == 1 and x.numerator % 6 == 0 for x in c.coefficients)
    return out


def verify_cohomology(gmax: int) -> dict[str, bool]:
    out = {}
    for g in range(2, gmax + 1):
        D = cc.diagonal_class(g)
        out[f"cohomology.g{g}.gross_schoen_trivial"] = cc.gross_schoen_class(g).is_zero()
        out[f"cohomology.g{g}.diagonal_self_intersection"] = cc.intersection_degree(D * D) == 2 - 2 * g
    return out


def verify_graphs() -> dict[str, bool]:
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", mg.GenusOneWarning)
        for ell in (1, 2, Fraction(7, 3)):
            out[f"graph.circle_{ell}.phi_zero"] = mg.phi_graph(mg.circle(ell)) == 0
    for name, G in (("circle", mg.circle(1)), ("theta", mg.theta()), ("dumbbell", mg.dumbbell())):
        mu = mg.admissible_measure(G)
        res = mg.admissibility_residual(G, mu)
        consts = {p.pieces[0].coeff(0) for p in res}
        out[f"graph.{name}.admissibility_residual_zero"] = (
            all(q.degree <= 0 for p in res for q in p.pieces) and len(consts) <= 1
        )
    return out


_SUITES = ("hodge", "picard", "cohomology", "graph")


def _cmd_verify(ns) -> RunReport:
    targets = set(ns.targets or [])
    unknown = targets - set(_SUITES)
    if unknown:
        raise ParseError("", f"unknown verify target(s): {', '.join(sorted(unknown))}")
    if ns.all or not targets:
        targets = set(_SUITES)
    verdicts: dict[str, bool] = {}
    if "hodge" in targets:
        gs = [ns.genus] if ns.genus else list(range(2, min(ns.gmax, 6) + 1))
        verdicts.update(verify_hodge(gs, ns.trials, ns.seed))
    if "picard" in targets:
        verdicts.update(verify_picard(ns.gmax))
    if "cohomology" in targets:
        verdicts.update(verify_cohomology(min(ns.gmax, 8)))
    if "graph" in targets:
        verdicts.update(verify_graphs())
    args = {"targets": sorted(targets), "gmax": ns.gmax, "trials": ns.trials, "seed": ns.seed, "genus": ns.genus}
    return RunReport("verify", _digest("verify", args), {"checked": len(verdicts)}, verdicts)


# --- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gross-schoen", description=__doc__)
    p.add_argument("--output", "-o", default="-", help="write the JSON report here ('-' for stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("phi-graph", help="φ-invariant of metrized graphs")
    s.add_argument("files", nargs="+")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--oracle", type=int, default=None, metavar="N", help="also run the N-segment discretization")

    s = sub.add_parser("phi-spectral", help="archimedean φ from spectral data")
    s.add_argument("file")

    s = sub.add_parser("height", help="Zhang's height formula")
    s.add_argument("--input", required=True)

    s = sub.add_parser("picard", help="class of the Bloch line bundle on M_{g,1}^c")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--family", default=None, help="JSON degrees of (ψ, λ, δ_1..δ_{g-1})")

    s = sub.add_parser("cohomology", help="Künneth expansion of the Gross-Schoen cycle")
    s.add_argument("--genus", type=int, required=True)

    s = sub.add_parser("verify", help="run identity suites")
    s.add_argument("targets", nargs="*", metavar="{hodge,picard,cohomology,graph}")
    s.add_argument("--all", action="store_true")
    s.add_argument("--genus", type=int, default=None)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--gmax", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    return p


_COMMANDS = {
    "phi-graph": _cmd_phi_graph,
    "phi-spectral": _cmd_phi_spectral,
    "height": _cmd_height,
    "picard": _cmd_picard,
    "cohomology": _cmd_cohomology,
    "verify": _cmd_verify,
}


def run(command: str, args: Sequence[str] = ()) -> RunReport:
    """Run one subcommand programmatically; raises instead of exiting."""
    ns = build_parser().parse_args([command, *args])
    t0 = time.perf_counter()
    report = _COMMANDS[ns.command](ns)
    report.timing = time.perf_counter() - t0
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        report = _COMMANDS[ns.command](ns)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.timing = time.perf_counter() - t0
    text = report.to_json() + "\n"
    if ns.output == "-":
        sys.stdout.write(text)
    else:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
