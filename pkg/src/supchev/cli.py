"""Command-line interface: ``supchev <command> [family] [options]``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Sequence

from .acceptance import halving_witness, run_all
from .kostant import (
    KostantSyntaxError,
    NormalizationStats,
    format_kostant,
    integrality_check,
    kostant_to_json,
    parse_kostant_expr,
    pbw_normalize,
)
from .lattice import adjoint_module, admissible_check, defining_module, missing_coroots, stabilizer_cartan, standard_lattice
from .rootdata import FamilyError
from .scalarring import format_number
from .superalg import ChevalleyBasis, SuperMatrix, build_chevalley_basis, structure_constants, verify_chevalley_axioms
from .supergroup import (
    FactorizationStats,
    GrassmannRing,
    NotFactorizable,
    WordSyntaxError,
    extract_odd_coordinates,
    factorize,
    group_module,
    lie_functor,
    matrix_to_json,
    normal_form_to_json,
    parse_group_word,
    word_to_matrix,
)

DEFAULT_NGENS = 6


class CliError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


def ngens_from_env() -> int:
    raw = os.environ.get("SUPCHEV_NGENS", str(DEFAULT_NGENS))
    try:
        n = int(raw)
    except ValueError:
        raise CliError("config", f"SUPCHEV_NGENS must be an integer, got {raw!r}") from None
    if not 0 <= n <= 16:
        raise CliError("config", "SUPCHEV_NGENS must lie in 0..16")
    return n


def _family(args) -> ChevalleyBasis:
    text = args.family_pos or args.family
    if not text:
        raise CliError("usage", "a family is required (positional or --family)")
    try:
        return build_chevalley_basis(text)
    except FamilyError as exc:
        raise CliError("family", str(exc)) from None


def _key_label(cb: ChevalleyBasis, k) -> str:
    return f"H{k[1]}" if isinstance(k, tuple) else cb.rd.label(k)


def _element_json(cb: ChevalleyBasis, k):
    el = cb.elem(k)
    if isinstance(el, SuperMatrix):
        return {"matrix": [[format_number(x) for x in row] for row in el.rows()]}
    return {"coordinates": {str(i): format_number(c) for i, c in sorted(el.entries.items())}}


# ---------------------------------------------------------------------------
# commands; each returns (json payload, text, exit status)
# ---------------------------------------------------------------------------


def cmd_roots(args):
    cb = _family(args)
    rd = cb.rd
    rows = []
    for r in rd.roots:
        rows.append(
            {
                "label": rd.label(r),
                "name": rd.name(r),
                "parity": r.parity,
                "sign": r.sign,
                "coords": list(r.coords),
                "pairing": list(rd.pairings[r]),
                "coroot": list(rd.coroots[r]) if r in rd.coroots else None,
            }
        )
    payload = {"family": str(rd.family), "rank": rd.rank, "roots": rows}
    text = "\n".join(f"{x['label']:>4}  {'odd ' if x['parity'] else 'even'}  {x['name']}" for x in rows)
    return payload, text, 0


def cmd_basis(args):
    cb = _family(args)
    items = []
    for k in cb.keys:
        items.append({"key": _key_label(cb, k), "parity": cb.key_parity(k), **_element_json(cb, k)})
    payload = {"family": str(cb.rd.family), "basis": items}
    lines = []
    for it in items:
        body = it.get("matrix") or it.get("coordinates")
        lines.append(f"{it['key']} ({'odd' if it['parity'] else 'even'}): {json.dumps(body)}")
    return payload, "\n".join(lines), 0


def cmd_verify(args):
    cb = _family(args)
    rep = verify_chevalley_axioms(cb)
    payload = {
        "family": rep.family,
        "ok": rep.ok,
        "summary": rep.summary(),
        "violations": [c.__dict__ for c in rep.violations],
        "observations": [c.__dict__ for c in rep.observations if not c.passed],
    }
    lines = [f"{rep.family}: {'pass' if rep.ok else 'FAIL'}"]
    for ax, s in payload["summary"].items():
        lines.append(f"  {ax}: {s['checked']} checked, {s['failed']} failed")
    for c in rep.violations[:20]:
        lines.append(f"  violation {c.axiom} {c.subject}: expected {c.expected}, got {c.got}")
    return payload, "\n".join(lines), 0 if rep.ok else 1


def cmd_constants(args):
    cb = _family(args)
    rd = cb.rd
    rows = [{"alpha": rd.label(a), "beta": rd.label(b), "c": format_number(c)} for a, b, c in structure_constants(cb) if c != 0]
    text = "\n".join(f"c({r['alpha']}, {r['beta']}) = {r['c']}" for r in rows)
    return {"family": str(rd.family), "constants": rows}, text, 0


def cmd_pbw(args):
    cb = _family(args)
    try:
        e = parse_kostant_expr(args.expr, cb.rd)
    except KostantSyntaxError as exc:
        raise CliError("syntax", str(exc), column=exc.column) from None
    stats = NormalizationStats()
    n = pbw_normalize(e, cb, stats)
    ok, _ = integrality_check(n)
    payload = {"family": str(cb.rd.family), "input": args.expr, "normal_form": kostant_to_json(n, cb.rd), "integral": ok, "steps": stats.steps}
    return payload, format_kostant(n, cb.rd), 0


def _ring(args) -> GrassmannRing:
    return GrassmannRing(ngens_from_env())


def _read_word(path: str, cb, ring):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    try:
        return parse_group_word(text, cb, ring)
    except (WordSyntaxError, KeyError, ValueError) as exc:
        raise CliError("syntax", f"{path}: {exc}") from None


def _module(cb, args):
    try:
        return group_module(cb, args.module, n_gens=ngens_from_env())
    except ValueError as exc:
        raise CliError("module", str(exc)) from None


def cmd_group_mul(args):
    cb = _family(args)
    gm = _module(cb, args)
    word = None
    for path in args.words:
        w = _read_word(path, cb, gm.ring)
        word = w if word is None else word * w
    try:
        m = word_to_matrix(word, gm)
    except ValueError as exc:
        raise CliError("group", str(exc)) from None
    rows = matrix_to_json(m)
    payload = {"family": str(cb.rd.family), "module": gm.module.kind, "ngens": gm.ring.n_gens, "matrix": rows}
    return payload, "\n".join("[" + ", ".join(r) + "]" for r in rows), 0


def cmd_group_factor(args):
    cb = _family(args)
    gm = _module(cb, args)
    w = _read_word(args.word, cb, gm.ring)
    try:
        nf = factorize(w, gm, FactorizationStats())
        ex = extract_odd_coordinates(word_to_matrix(w, gm), gm)
    except (ValueError, NotFactorizable) as exc:
        raise CliError("group", str(exc)) from None
    agree = ex.coordinates() == nf.coordinates() and ex.g0 == nf.g0
    payload = normal_form_to_json(nf, cb)
    lines = ["g0:"] + ["  [" + ", ".join(r) + "]" for r in payload["g0"]]
    for part in ("theta_minus", "theta_plus"):
        for lab, v in payload[part].items():
            lines.append(f"{part} {lab}: {v}")
    lines.append(f"extraction agrees: {agree}")
    payload = {**payload, "extraction_agrees": agree}
    return payload, "\n".join(lines), 0 if agree else 1


def cmd_lattice_check(args):
    cb = _family(args)
    try:
        mod = defining_module(cb) if args.module == "defining" else adjoint_module(cb)
    except ValueError as exc:
        raise CliError("module", str(exc)) from None
    lat = standard_lattice(mod)
    ok, wit = admissible_check(mod, lat)
    half = halving_witness(mod, lat)
    st = stabilizer_cartan(mod)
    idx = st.index_over_hz()
    missing = [cb.rd.label(r) for r in missing_coroots(mod)]
    payload = {
        "family": str(cb.rd.family),
        "module": mod.kind,
        "admissible": ok,
        "witness": None if wit is None else {"generator": wit.generator, "column": wit.column},
        "half_scaled": None if half is None else {"vector": half[0], "generator": half[1].generator, "column": half[1].column},
        "stabilizer_index": None if idx is None else str(idx),
        "missing_coroots": missing,
    }
    text = "\n".join(
        [
            f"{payload['family']} {mod.kind} lattice admissible: {ok}",
            f"half-scaled vector {half[0]} rejected by {half[1].generator}" if half else "no half-scaled vector rejected",
            f"[h_V : h_Z] = {payload['stabilizer_index']}",
            f"coroots missing from h_V: {missing or 'none'}",
        ]
    )
    return payload, text, 0 if ok and not missing else 1


def cmd_lie_check(args):
    cb = _family(args)
    rep = lie_functor(cb, args.module)
    payload = {"family": str(cb.rd.family), "ok": rep.ok, "checks": rep.checks, "failures": rep.failures[:50]}
    return payload, f"{payload['family']}: {rep.checks} checks, {len(rep.failures)} failures", 0 if rep.ok else 1


def cmd_selftest(args):
    results = run_all(seed=args.seed, jobs=args.jobs)
    payload = {
        "seed": args.seed,
        "ok": all(r.passed for r in results),
        "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results],
    }
    return payload, "\n".join(r.line() for r in results), 0 if payload["ok"] else 1


COMMANDS = {
    "roots": cmd_roots,
    "basis": cmd_basis,
    "verify": cmd_verify,
    "constants": cmd_constants,
    "pbw": cmd_pbw,
    "group-mul": cmd_group_mul,
    "group-factor": cmd_group_factor,
    "lattice-check": cmd_lattice_check,
    "lie-check": cmd_lie_check,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--family", help="family, e.g. sl(2|1), osp(3|2), P(2), D(2,1;2)")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="supchev", description="Chevalley bases, Kostant forms and Chevalley supergroups.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("roots", "basis", "verify", "constants"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("family_pos", nargs="?", metavar="family")
    sp = sub.add_parser("pbw", parents=[common], help="normalize a Kostant-form expression")
    sp.add_argument("expr")
    sp.set_defaults(family_pos=None)
    sp = sub.add_parser("group-mul", parents=[common], help="multiply word files")
    sp.add_argument("words", nargs="+")
    sp.add_argument("--module", choices=("defining", "adjoint"), default="defining")
    sp.set_defaults(family_pos=None)
    sp = sub.add_parser("group-factor", parents=[common], help="normal form of a word file")
    sp.add_argument("word")
    sp.add_argument("--module", choices=("defining", "adjoint"), default="defining")
    sp.set_defaults(family_pos=None)
    for name in ("lattice-check", "lie-check"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("family_pos", nargs="?", metavar="family")
        sp.add_argument("--module", choices=("defining", "adjoint"), default="defining")
    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    sp.add_argument("--jobs", type=int, default=1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    try:
        payload, text, status = COMMANDS[args.command](args)
    except CliError as exc:
        err = {"error": str(exc), "kind": exc.kind, **exc.extra}
        if args.format == "json":
            print(json.dumps(err, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
