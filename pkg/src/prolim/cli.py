"""Batch front end: JSON problem documents in, deterministic reports out.

Exit codes separate mathematical answers from plumbing: 0 = solved /
verified / analysis complete, 2 = a genuine mathematical negative (not in
the image, not a coboundary, no pair within the search bound), 3 = the
document or flags are at fault, 4 = the requested depth cannot be
certified.  Reports go to stdout as JSON with sorted keys and scalars as
strings -- never floating numbers -- so identical documents produce
byte-identical bodies (timing aside).  A small human-readable table goes
to stderr, and --csv writes the same table as CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import (
    CertificateError,
    DepthInsufficientError,
    DocumentError,
    FieldMismatchError,
    InexactDivisionError,
    LevelProviderError,
    NotAFieldError,
    NotInImageError,
    ShapeError,
    SizeCapError,
    SquareCommutationError,
    UnstabilizedError,
)
from .fields import domain_from_token
from .linalg import Matrix
from .towers import (
    BandMapSpec,
    coordinate_tower,
    first_inconsistency,
    reindex_cofinal,
    tower_from_levels,
    towermap_from_band,
)
from .closure import (
    PreimageCertificate,
    construct_preimage,
    stabilization_table,
    verify_certificate,
)
from .groups import Representation, cyclic, finite_table, free, free_abelian
from .cohomology import (
    CochainPrefix,
    certificate_cochain,
    cocycle_defect,
    finite_cohomology_dims,
    reindexed_coboundary,
    solve_coboundary,
)
from .counterexamples import (
    DensityProbe,
    IntBandSystem,
    builtin_towermap,
    example1_min_norm_series,
    example1_over_field,
    example1_per_level_solvable,
    example2_approximate,
)

EXIT_OK = 0
EXIT_NEGATIVE = 2   # a valid mathematical "no"
EXIT_INPUT = 3      # the document is at fault
EXIT_DEPTH = 4      # cannot certify at the requested depth

_COMMANDS = ("solve", "cohom", "counterexample", "verify")
_DEFAULT_DEPTH = {"solve": 8, "cohom": 3, "counterexample": 8, "verify": 1}
_MAX_ENTRIES = 2_000_000


@dataclass(frozen=True)
class ProblemDocument:
    version: str
    command: str
    domain: object
    depth: int
    seed: object
    payload: dict


# ---------------------------------------------------------------------------
# document parsing


def _as_int(value, path, *, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, f"expected an integer, got {type(value).__name__}")
    if minimum is not None and value < minimum:
        raise DocumentError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_list(value, path):
    if not isinstance(value, list):
        raise DocumentError(path, f"expected an array, got {type(value).__name__}")
    return value


def _as_object(value, path):
    if not isinstance(value, dict):
        raise DocumentError(path, f"expected an object, got {type(value).__name__}")
    return value


def _parse_scalar(domain, value, path):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(path, "exact scalars are written as strings "
                                  f"(or plain integers), got {type(value).__name__}")
    try:
        return domain.parse(str(value))
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _parse_vector(domain, value, path):
    return tuple(_parse_scalar(domain, x, f"{path}[{k}]")
                 for k, x in enumerate(_as_list(value, path)))


def _parse_matrix(domain, value, path):
    rows = [_parse_vector(domain, row, f"{path}[{k}]")
            for k, row in enumerate(_as_list(value, path))]
    width = len(rows[0]) if rows else 0
    for k, row in enumerate(rows):
        if len(row) != width:
            raise DocumentError(f"{path}[{k}]", f"ragged matrix: row has {len(row)} "
                                                f"entries, first row has {width}")
    return Matrix(domain, rows, cols=width)


def _parse_fraction(value, path):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(path, "rationals are written as strings, "
                                  f"got {type(value).__name__}")
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise DocumentError(path, f"invalid rational {value!r}") from None


def _load_raw(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON: {exc}") from None
    return _as_object(raw, "$")


def _document_from_raw(raw):
    version = raw.get("version", "1")
    if version != "1":
        raise DocumentError("version", f"unsupported document version {version!r}")
    command = raw.get("command")
    if command not in _COMMANDS:
        raise DocumentError("command", f"unknown command {command!r}; "
                                       f"expected one of {', '.join(_COMMANDS)}")
    token = raw.get("field", "q")
    if not isinstance(token, str):
        raise DocumentError("field", "field token must be a string")
    try:
        domain = domain_from_token(token)
    except ValueError as exc:
        raise DocumentError("field", str(exc)) from None
    if not domain.is_field and command != "counterexample":
        raise DocumentError("field", f"ring token {token!r} is only valid with the "
                                     f"counterexample command, not {command!r}")
    depth = _as_int(raw.get("depth", _DEFAULT_DEPTH[command]), "depth", minimum=1)
    seed = raw.get("seed")
    if seed is not None:
        seed = _as_int(seed, "seed")
    payload = _as_object(raw.get("payload", {}), "payload")
    return ProblemDocument(version, command, domain, depth, seed, payload)


def parse_problem(text):
    """Validate a UTF-8 JSON problem document; diagnostics name the
    offending path."""
    return _document_from_raw(_load_raw(text))


# ---------------------------------------------------------------------------
# payload builders


def _build_group(spec, path):
    spec = _as_object(spec, path)
    kind = spec.get("kind")
    try:
        if kind == "cyclic":
            return cyclic(_as_int(spec.get("n"), f"{path}.n", minimum=1))
        if kind == "free":
            return free(_as_int(spec.get("rank"), f"{path}.rank", minimum=1))
        if kind == "free_abelian":
            return free_abelian(_as_int(spec.get("rank"), f"{path}.rank", minimum=1))
        if kind == "finite_table":
            table = _as_list(spec.get("table"), f"{path}.table")
            gens = spec.get("generators")
            if gens is not None:
                gens = [_as_int(g, f"{path}.generators[{k}]", minimum=0)
                        for k, g in enumerate(_as_list(gens, f"{path}.generators"))]
            return finite_table(table, gens)
    except (ValueError, ShapeError) as exc:
        raise DocumentError(path, str(exc)) from None
    raise DocumentError(f"{path}.kind", f"unknown group kind {kind!r}; expected "
                                        "cyclic, free, free_abelian or finite_table")


def _build_representation(group, spec, domain, path):
    if spec is None or spec == "trivial":
        return Representation.trivial(group, domain, 1)
    spec = _as_object(spec, path)
    try:
        if "generators" in spec:
            mats = [_parse_matrix(domain, m, f"{path}.generators[{k}]")
                    for k, m in enumerate(_as_list(spec["generators"], f"{path}.generators"))]
            return Representation(group, domain, mats)
        dim = _as_int(spec.get("dim", 1), f"{path}.dim", minimum=1)
        return Representation.trivial(group, domain, dim)
    except (ValueError, ShapeError) as exc:
        raise DocumentError(path, str(exc)) from None


def _build_band_towermap(band, domain, path):
    band = _as_object(band, path)
    source_dims = [_as_int(d, f"{path}.source_dims[{k}]", minimum=0)
                   for k, d in enumerate(_as_list(band.get("source_dims"), f"{path}.source_dims"))]
    target_dims = [_as_int(d, f"{path}.target_dims[{k}]", minimum=0)
                   for k, d in enumerate(_as_list(band.get("target_dims"), f"{path}.target_dims"))]
    input_levels = [_as_int(b, f"{path}.input_levels[{k}]", minimum=1)
                    for k, b in enumerate(_as_list(band.get("input_levels"), f"{path}.input_levels"))]
    levels = [_parse_matrix(domain, m, f"{path}.levels[{k}]")
              for k, m in enumerate(_as_list(band.get("levels"), f"{path}.levels"))]
    count = len(levels)
    if len(input_levels) != count or len(target_dims) < count:
        raise DocumentError(path, f"{count} level maps need {count} input levels "
                                  f"and at least {count} target dims")
    if input_levels and max(input_levels) > len(source_dims):
        raise DocumentError(f"{path}.source_dims",
                            f"input level {max(input_levels)} exceeds the "
                            f"{len(source_dims)} provided source dims")

    def connects(dims, kind):
        data = band.get(kind)
        if data is None:
            return None
        return [_parse_matrix(domain, m, f"{path}.{kind}[{k}]")
                for k, m in enumerate(_as_list(data, f"{path}.{kind}"))]

    try:
        src_q = connects(source_dims, "source_connects")
        source = (tower_from_levels(domain, source_dims, src_q, name="document-source")
                  if src_q is not None else
                  coordinate_tower(domain, source_dims, name="document-source"))
        tgt_q = connects(target_dims, "target_connects")
        target = (tower_from_levels(domain, target_dims, tgt_q, name="document-target")
                  if tgt_q is not None else
                  coordinate_tower(domain, target_dims, name="document-target"))
        spec = BandMapSpec(input_level=lambda j: input_levels[j - 1],
                           level_matrix=lambda j: levels[j - 1])
        tmap = towermap_from_band(spec, source, target, name="document band map")
        tmap.ensure(count)
        bad = None
        from .towers import verify_squares
        bad = verify_squares(tmap, count)
    except SquareCommutationError as exc:
        raise DocumentError(path, str(exc)) from None
    except (ShapeError, LevelProviderError, FieldMismatchError) as exc:
        raise DocumentError(path, str(exc)) from None
    if bad is not None:
        raise DocumentError(path, f"level maps do not commute with the "
                                  f"connecting maps at levels {bad}")
    return tmap, count


def _build_towermap(spec, domain, path):
    """Returns (tower map, provided level count or None for unbounded)."""
    if isinstance(spec, str):
        try:
            return builtin_towermap(spec, domain), None
        except KeyError as exc:
            raise DocumentError(path, exc.args[0]) from None
    spec = _as_object(spec, path)
    if "band" in spec:
        return _build_band_towermap(spec["band"], domain, f"{path}.band")
    raise DocumentError(path, 'expected a builtin map name or an object with a "band" key')


def _identity_indexed(tmap, depth):
    return reindex_cofinal(tmap) if not tmap.has_identity_index(depth) else tmap


# ---------------------------------------------------------------------------
# certificates as JSON


def certificate_to_json(domain, cert):
    def vec(v):
        return [domain.format(x) for x in v]

    return {
        "depth": cert.depth,
        "ell": list(cert.ell),
        "stabilized": list(cert.stabilized),
        "depth_conditional": cert.depth_conditional,
        "v": [vec(x) for x in cert.v],
        "v_lift": [vec(x) for x in cert.v_lift],
        "target_prefix": [vec(x) for x in cert.target_prefix],
        "checks": {
            "lift_solves": list(cert.lift_solves),
            "lift_projects": list(cert.lift_projects),
            "consistent": list(cert.consistent),
        },
    }


def _as_bool_list(value, path, expect):
    value = _as_list(value, path)
    if len(value) != expect or any(not isinstance(x, bool) for x in value):
        raise DocumentError(path, f"expected {expect} booleans")
    return tuple(value)


def certificate_from_json(domain, data, path):
    data = _as_object(data, path)
    depth = _as_int(data.get("depth"), f"{path}.depth", minimum=1)
    ell = tuple(_as_int(x, f"{path}.ell[{k}]", minimum=1)
                for k, x in enumerate(_as_list(data.get("ell"), f"{path}.ell")))
    if len(ell) != depth:
        raise DocumentError(f"{path}.ell", f"expected {depth} levels, got {len(ell)}")
    stabilized = _as_bool_list(data.get("stabilized", [False] * depth),
                               f"{path}.stabilized", depth)
    vecs = {}
    for key in ("v", "v_lift", "target_prefix"):
        vecs[key] = tuple(_parse_vector(domain, v, f"{path}.{key}[{k}]")
                          for k, v in enumerate(_as_list(data.get(key), f"{path}.{key}")))
    if len(vecs["v"]) != depth or len(vecs["v_lift"]) != depth:
        raise DocumentError(path, f"v and v_lift must each hold {depth} vectors")
    if len(vecs["target_prefix"]) < ell[-1]:
        raise DocumentError(f"{path}.target_prefix",
                            f"needs at least ell({depth}) = {ell[-1]} levels")
    checks = _as_object(data.get("checks", {}), f"{path}.checks")
    return PreimageCertificate(
        depth=depth,
        ell=ell,
        stabilized=stabilized,
        depth_conditional=bool(data.get("depth_conditional", not all(stabilized))),
        v=vecs["v"],
        v_lift=vecs["v_lift"],
        target_prefix=vecs["target_prefix"],
        lift_solves=_as_bool_list(checks.get("lift_solves", [True] * depth),
                                  f"{path}.checks.lift_solves", depth),
        lift_projects=_as_bool_list(checks.get("lift_projects", [True] * depth),
                                    f"{path}.checks.lift_projects", depth),
        consistent=_as_bool_list(checks.get("consistent", [True] * (depth - 1)),
                                 f"{path}.checks.consistent", depth - 1),
    )


def _stabilization_rows(records):
    return [(rec.level, rec.ell, "yes" if rec.stabilized else "no") for rec in records]


# ---------------------------------------------------------------------------
# command handlers: each returns (status, payload, exit code, table)


def _run_solve(doc):
    domain, depth = doc.domain, doc.depth
    tmap, available = _build_towermap(doc.payload.get("map", "example1_field"),
                                      domain, "payload.map")
    if available is not None and available < depth:
        raise DocumentError("depth", f"document provides {available} levels "
                                     f"but depth {depth} was requested")
    tmap = _identity_indexed(tmap, depth)
    target_data = _as_list(doc.payload.get("target"), "payload.target")
    target = [_parse_vector(domain, w, f"payload.target[{k}]")
              for k, w in enumerate(target_data)]
    for k, w in enumerate(target):
        expect = tmap.target.dim(k + 1)
        if len(w) != expect:
            raise DocumentError(f"payload.target[{k}]",
                                f"level {k + 1} has dimension {expect}, got {len(w)}")
    bad = first_inconsistency(tmap.target, target)
    if bad is not None:
        raise DocumentError("payload.target", f"prefix inconsistent at level {bad}")
    chain_depth = depth + 3 if available is None else min(depth + 3, available)
    records = stabilization_table(tmap, depth, chain_depth=chain_depth,
                                  max_entries=_MAX_ENTRIES)
    table = (("level", "ell", "stabilized"), _stabilization_rows(records))
    try:
        cert = construct_preimage(tmap, target, depth, records=records,
                                  strict=False, max_entries=_MAX_ENTRIES)
    except NotInImageError as exc:
        return ("not_in_image", {"failing_level": exc.level}, EXIT_NEGATIVE, table)
    return ("ok", {"certificate": certificate_to_json(domain, cert)}, EXIT_OK, table)


def _cochain_from_payload(rep, degree, spec, path):
    spec = _as_object(spec, path)
    radius = _as_int(spec.get("radius"), f"{path}.radius", minimum=0)
    values = [_parse_vector(rep.domain, v, f"{path}.values[{k}]")
              for k, v in enumerate(_as_list(spec.get("values"), f"{path}.values"))]
    try:
        return CochainPrefix(rep, degree, radius, values)
    except ShapeError as exc:
        raise DocumentError(path, str(exc)) from None


def _cochain_to_json(z):
    return {"radius": z.radius,
            "values": [[z.rep.domain.format(x) for x in v] for v in z.values]}


def _run_cohom(doc):
    domain = doc.domain
    group = _build_group(doc.payload.get("group"), "payload.group")
    rep = _build_representation(group, doc.payload.get("representation"),
                                domain, "payload.representation")
    task = doc.payload.get("task", "dims")
    degree = _as_int(doc.payload.get("degree", 1), "payload.degree", minimum=0)

    if task == "dims":
        try:
            z_dim, b_dim, h_dim = finite_cohomology_dims(rep, degree,
                                                         max_entries=_MAX_ENTRIES)
        except ShapeError as exc:
            raise DocumentError("payload.group", str(exc)) from None
        table = (("space", "dimension"),
                 [(f"Z^{degree}", z_dim), (f"B^{degree}", b_dim), (f"H^{degree}", h_dim)])
        return ("ok", {"dims": {"cocycles": z_dim, "coboundaries": b_dim,
                                "cohomology": h_dim}}, EXIT_OK, table)

    if task not in ("check", "solve"):
        raise DocumentError("payload.task", f"unknown task {task!r}; "
                                            "expected dims, check or solve")
    if degree < 1:
        raise DocumentError("payload.degree", f"task {task!r} needs degree >= 1")
    z = _cochain_from_payload(rep, degree, doc.payload.get("cocycle"), "payload.cocycle")

    if task == "check":
        report = cocycle_defect(z)
        defects = [{"tuple": [group.format_element(g) for g in t],
                    "value": [domain.format(x) for x in val]}
                   for t, val in report.defects[:16]]
        payload = {"checked": report.checked, "defect_count": len(report.defects),
                   "defects": defects}
        if report.is_cocycle:
            return ("cocycle", payload, EXIT_OK, None)
        return ("not_a_cocycle", payload, EXIT_NEGATIVE, None)

    try:
        cert = solve_coboundary(z, doc.depth, strict=False, max_entries=_MAX_ENTRIES)
    except NotInImageError as exc:
        return ("not_a_coboundary", {"failing_level": exc.level}, EXIT_NEGATIVE, None)
    except ValueError as exc:
        return ("not_a_cocycle", {"error": str(exc)}, EXIT_NEGATIVE, None)
    solution = certificate_cochain(rep, degree, cert)
    table = (("level", "ell", "stabilized"),
             [(k + 1, cert.ell[k], "yes" if cert.stabilized[k] else "no")
              for k in range(cert.depth)])
    return ("ok", {"certificate": certificate_to_json(domain, cert),
                   "solution": _cochain_to_json(solution)}, EXIT_OK, table)


def _growth_reference(i):
    return str(Fraction(2 ** i, 3))


def _run_counterexample(doc):
    which = doc.payload.get("which", "example1")
    if which == "example1":
        return _run_example1(doc)
    if which == "example2":
        return _run_example2(doc)
    raise DocumentError("payload.which", f"unknown counterexample {which!r}; "
                                         "expected example1 or example2")


def _run_example1(doc):
    depth = doc.depth
    qspec = doc.payload.get("q", "alternating")
    try:
        if isinstance(qspec, str):
            sys_ = IntBandSystem.from_text(qspec, depth)
        else:
            entries = [_as_int(x, f"payload.q[{k}]")
                       for k, x in enumerate(_as_list(qspec, "payload.q"))]
            if len(entries) < depth:
                raise DocumentError("payload.q", f"target list has {len(entries)} "
                                                 f"entries but depth {depth} was asked")
            sys_ = IntBandSystem(tuple(entries[:depth]))
    except ValueError as exc:
        raise DocumentError("payload.q", str(exc)) from None
    series = example1_min_norm_series(sys_)
    _, witness = example1_per_level_solvable(sys_, depth)
    payload = {
        "which": "example1",
        "q": list(sys_.q),
        "per_level_solvable": True,
        "witness_level": depth,
        "witness": list(witness),
        "min_norm": [{"level": i + 1, "value": m} for i, m in enumerate(series)],
        "growth_reference": [_growth_reference(i) for i in range(1, depth + 1)],
    }
    if doc.domain.is_field:
        cert = example1_over_field(sys_, depth, domain=doc.domain)
        payload["certificate"] = certificate_to_json(doc.domain, cert)
    table = (("level", "min_norm", "2^i/3"),
             [(i + 1, m, _growth_reference(i + 1)) for i, m in enumerate(series)])
    return ("ok", payload, EXIT_OK, table)


def _run_example2(doc):
    payload = doc.payload
    target = _parse_fraction(payload.get("t", "0"), "payload.t")
    eps = _parse_fraction(payload.get("eps", "1/1000"), "payload.eps")
    bound = _as_int(payload.get("bound", 100), "payload.bound", minimum=1)
    try:
        probe = DensityProbe(target, eps, bound)
    except ValueError as exc:
        raise DocumentError("payload", str(exc)) from None
    match = example2_approximate(probe)
    if match is None:
        return ("no_match", {"which": "example2", "t": str(target), "eps": str(eps),
                             "bound": bound}, EXIT_NEGATIVE, None)
    payload_out = {"which": "example2", "t": str(target), "eps": str(eps),
                   "bound": bound, "m": match.m, "n": match.n,
                   "residual_bound": str(match.residual), "digits": match.digits}
    table = (("m", "n", "residual_bound", "digits"),
             [(match.m, match.n, str(match.residual), match.digits)])
    return ("ok", payload_out, EXIT_OK, table)


def _run_verify(doc):
    domain = doc.domain
    map_spec = doc.payload.get("map")
    if isinstance(map_spec, dict) and "cohomology" in map_spec:
        co = _as_object(map_spec["cohomology"], "payload.map.cohomology")
        group = _build_group(co.get("group"), "payload.map.cohomology.group")
        rep = _build_representation(group, co.get("representation"), domain,
                                    "payload.map.cohomology.representation")
        degree = _as_int(co.get("degree", 1), "payload.map.cohomology.degree", minimum=1)
        tmap = reindexed_coboundary(rep, degree)
    else:
        tmap, _ = _build_towermap(map_spec, domain, "payload.map")
    cert = certificate_from_json(domain, doc.payload.get("certificate"),
                                 "payload.certificate")
    tmap = _identity_indexed(tmap, cert.depth)
    ok, failures = verify_certificate(tmap, cert, max_entries=_MAX_ENTRIES)
    if "target" in doc.payload:
        supplied = tuple(_parse_vector(domain, w, f"payload.target[{k}]")
                         for k, w in enumerate(_as_list(doc.payload["target"],
                                                        "payload.target")))
        if supplied[:len(cert.target_prefix)] != cert.target_prefix:
            ok = False
            failures = list(failures) + ["stored target prefix differs from the "
                                         "supplied target"]
    payload = {"verified": ok, "failures": list(failures)}
    status = "verified" if ok else "failed"
    return (status, payload, EXIT_OK if ok else EXIT_NEGATIVE, None)


_HANDLERS = {
    "solve": _run_solve,
    "cohom": _run_cohom,
    "counterexample": _run_counterexample,
    "verify": _run_verify,
}


def run(doc):
    """Dispatch a parsed document.  Returns (report, exit code, table)."""
    start = time.monotonic()
    table = None
    try:
        status, payload, code, table = _HANDLERS[doc.command](doc)
    except DocumentError as exc:
        status, payload, code = "input_error", {"error": str(exc)}, EXIT_INPUT
    except (ShapeError, NotAFieldError, FieldMismatchError, InexactDivisionError,
            LevelProviderError, SizeCapError, SquareCommutationError,
            CertificateError) as exc:
        status, payload, code = "input_error", {"error": str(exc)}, EXIT_INPUT
    except (DepthInsufficientError, UnstabilizedError) as exc:
        status, payload, code = "depth_insufficient", {"error": str(exc)}, EXIT_DEPTH
    except NotInImageError as exc:
        status, payload, code = "not_in_image", {"failing_level": exc.level}, EXIT_NEGATIVE
    report = {
        "tool": f"prolim {__version__}",
        "version": doc.version,
        "command": doc.command,
        "field": doc.domain.token,
        "depth": doc.depth,
        "seed": doc.seed,
        "status": status,
        "payload": payload,
        "timing_ms": int((time.monotonic() - start) * 1000),
    }
    return report, code, table


# ---------------------------------------------------------------------------
# entry point


def _render_table(table):
    headers, rows = table
    cells = [tuple(str(c) for c in headers)] + [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
             for row in cells]
    return "\n".join(lines)


def _write_csv(path, table):
    headers, rows = table
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(headers)
        writer.writerows(rows)


def _error_report(command, message):
    return {
        "tool": f"prolim {__version__}",
        "version": "1",
        "command": command,
        "field": None,
        "depth": None,
        "seed": None,
        "status": "input_error",
        "payload": {"error": message},
        "timing_ms": 0,
    }


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="prolim",
        description="Exact solvers over towers of finite-dimensional spaces: "
                    "preimage certificates, group cohomology, and the two "
                    "classical boundary examples.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "construct a certified preimage prefix for a tower map",
        "cohom": "cohomology tasks: dims, cocycle check, coboundary solve",
        "counterexample": "run the integer band system or the density scan",
        "verify": "re-check an emitted certificate from scratch",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--input", help="problem document file (default: stdin)")
        p.add_argument("--depth", type=int, help="certification depth override")
        p.add_argument("--field", help="scalar domain: q, fp:<prime>, or z "
                                       "(z only with counterexample)")
        p.add_argument("--seed", type=int, help="seed recorded in the report")
        p.add_argument("--csv", help="also write the report table as CSV")
        if name == "counterexample":
            p.add_argument("--which", choices=("example1", "example2"))
            p.add_argument("--q", help="example1 target: alternating|zero|unit "
                                       "or a comma-separated integer list")
            p.add_argument("--t", help="example2 target (rational string)")
            p.add_argument("--eps", help="example2 tolerance (rational string)")
            p.add_argument("--bound", type=int, help="example2 search bound")
    return parser


def _raw_from_args(args):
    flag_only = (args.command == "counterexample" and args.input is None
                 and any(getattr(args, k, None) is not None
                         for k in ("which", "q", "t", "eps", "bound")))
    if args.input is not None:
        with open(args.input, "r", encoding="utf-8") as fh:
            raw = _load_raw(fh.read())
    elif flag_only:
        raw = {"command": "counterexample"}
    else:
        text = sys.stdin.read()
        if not text.strip():
            raise DocumentError("$", "no input document (use --input or pipe JSON "
                                     "to stdin; counterexample also accepts pure flags)")
        raw = _load_raw(text)
    if "command" not in raw:
        raw["command"] = args.command
    elif raw["command"] != args.command:
        raise DocumentError("command", f"document says {raw['command']!r} but the "
                                       f"{args.command} subcommand was invoked")
    if args.depth is not None:
        raw["depth"] = args.depth
    if args.field is not None:
        raw["field"] = args.field
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.command == "counterexample":
        payload = raw.setdefault("payload", {})
        if not isinstance(payload, dict):
            raise DocumentError("payload", "expected an object")
        for key in ("which", "q", "t", "eps"):
            value = getattr(args, key, None)
            if value is not None:
                payload[key] = value
        if args.bound is not None:
            payload["bound"] = args.bound
    return raw


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        raw = _raw_from_args(args)
        doc = _document_from_raw(raw)
    except DocumentError as exc:
        report, code, table = _error_report(args.command, str(exc)), EXIT_INPUT, None
    except OSError as exc:
        report, code, table = _error_report(args.command, f"cannot read input: {exc}"), \
            EXIT_INPUT, None
    else:
        report, code, table = run(doc)
    print(json.dumps(report, indent=2, sort_keys=True))
    summary = (f"prolim {report['command']}  field={report['field']}  "
               f"depth={report['depth']}  status={report['status']}")
    print(summary, file=sys.stderr)
    if table is not None:
        print(_render_table(table), file=sys.stderr)
    if args.csv:
        if table is not None:
            _write_csv(args.csv, table)
        else:
            print("no tabular section for this command; CSV not written",
                  file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
