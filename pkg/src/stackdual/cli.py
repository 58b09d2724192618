"""Command line front end: ``stackdual <command> ...``.

Every command prints one report with ``command``, ``inputs``, ``outputs``, ``checks``,
``ok`` and ``timing``.  Exit status is 0 when every check passes, 1 when a check fails and
2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
from importlib import resources
import random
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import duality, heis
from .errors import InputError
from .gtau import component_group, general_embeddings, make_embedding, verify_appendix_c
from .registry import resolve_group
from .rootdata import center, langlands_dual
from .symp import (SymplecticModule, Subgroup, annihilator, enumerate_lagrangians, quotient_dual_check,
                   subgroup_quotient)
from .weylfix import brute_force_invariants, j_global_sections, torus_weyl_invariants

COMMANDS = ("center", "dual", "gtau-verify", "components", "weyl-invariants", "j-sections",
            "lagrangians", "annihilator", "self-dual", "dualize", "heisenberg", "fm-map", "regressions")
DEFAULT_CAP = 65536
RELATION_CHECK_LIMIT = 2 ** 10

Check = Dict[str, Any]
Result = Tuple[Dict[str, Any], Dict[str, Any], List[Check]]


def _check(name: str, ok: bool, certificate: Any = None) -> Check:
    return {"name": name, "ok": bool(ok), "certificate": certificate}


def _default(obj: Any) -> Any:
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_matrix(text: Optional[str]) -> List[List[int]]:
    """``"1,0;0,1"`` or ``"[[1,0],[0,1]]"``; empty means no rows."""
    if text is None or not text.strip():
        return []
    text = text.strip()
    try:
        if text.startswith("["):
            rows = json.loads(text)
            if rows and not isinstance(rows[0], list):
                rows = [rows]
        else:
            rows = [[int(x) for x in r.replace(",", " ").split()] for r in text.split(";") if r.strip()]
        return [[int(x) for x in r] for r in rows]
    except (ValueError, TypeError) as exc:
        raise InputError(f"cannot parse matrix {text!r}") from exc


def _module(algebra: str, genus: int) -> SymplecticModule:
    return SymplecticModule.from_datum(duality._sc_datum(algebra), genus)


# --- commands -----------------------------------------------------------------------

def cmd_center(a) -> Result:
    d = resolve_group(a.group)
    cd = center(d)
    checks = []
    if cd.pairing is not None:
        checks.append(_check("pairing_symmetric", cd.pairing.is_symmetric()))
        checks.append(_check("pairing_perfect", cd.pairing.is_perfect()))
    out = {"group": cd.group.to_json(), "order": cd.group.order,
           "center": cd.to_json()}
    return {"group": a.group, "datum": d.name}, out, checks


def cmd_dual(a) -> Result:
    d = resolve_group(a.group)
    dual = langlands_dual(d)
    checks = [_check("involution", langlands_dual(dual).same_as(d)),
              _check("types_dualized", tuple(t.dual() for t in d.types) == tuple(dual.types))]
    return {"group": a.group}, {"dual": dual.to_json()}, checks


def _embeddings(a):
    d = resolve_group(a.group)
    cd = center(d)
    if a.tau:
        return d, cd, [make_embedding(cd, parse_matrix(a.tau))]
    return d, cd, general_embeddings(cd)


def cmd_gtau_verify(a) -> Result:
    d, cd, embs = _embeddings(a)
    reports, checks = [], []
    for i, tau in enumerate(embs):
        rep = verify_appendix_c(d, tau)
        reports.append(rep)
        ok = (rep["torus_sign_flip_is_isomorphism"] and rep["exact_sequences"]["ok"]
              and rep["dual_tau_general"] and rep["dual_tau_injective"]
              and rep["component_group_matches_center"])
        checks.append(_check(f"embedding_{i}", ok, {"tau_matrix": rep["tau_matrix"]}))
    return ({"group": a.group, "tau": a.tau},
            {"center": cd.group.to_json(), "embeddings": len(embs), "reports": reports}, checks)


def cmd_components(a) -> Result:
    d, cd, embs = _embeddings(a)
    rows, checks = [], []
    for i, tau in enumerate(embs):
        comp = component_group(tau)
        rows.append({"tau": tau.to_json(),
                     "group": comp.group.to_json(), "bijective": comp.bijective})
        checks.append(_check(f"embedding_{i}", comp.bijective and comp.group == cd.group))
    return {"group": a.group, "tau": a.tau}, {"center": cd.group.to_json(), "components": rows}, checks


def cmd_weyl_invariants(a) -> Result:
    d = resolve_group(a.group)
    inv = torus_weyl_invariants(d)
    pts = inv.points()
    checks = [_check("points_match_order", len(set(pts)) == inv.group.order)]
    if a.brute_denominator:
        brute = brute_force_invariants(d, a.brute_denominator)
        checks.append(_check("brute_force_agrees", frozenset(pts) == brute,
                             {"denominator": a.brute_denominator, "brute_count": len(brute)}))
    out = {"invariants": inv.to_json(), "order": inv.group.order, "points": [p.to_json() for p in pts]}
    return {"group": a.group, "brute_denominator": a.brute_denominator}, out, checks


def _ramified(d, text: str) -> List[int]:
    text = text.strip().lower()
    if text == "all":
        return list(range(len(d.roots)))
    if text in ("none", ""):
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"cannot parse root indices {text!r}") from exc


def cmd_j_sections(a) -> Result:
    d = resolve_group(a.group)
    res = j_global_sections(d, _ramified(d, a.ramified))
    checks = []
    if res.image_of_cover is not None:
        checks.append(_check("all_ramified_is_cover_image", set(res.points) == set(res.image_of_cover)))
    out = res.to_json()
    out["image_of_cover"] = None if res.image_of_cover is None else [p.to_json() for p in res.image_of_cover]
    return {"group": a.group, "ramified": a.ramified}, out, checks


def cmd_lagrangians(a) -> Result:
    m = _module(a.algebra, a.genus)
    lags = enumerate_lagrangians(m, cap=a.cap)
    rows = [{"generators": [list(x) for x in l.generators], "structure": l.structure().to_json()} for l in lags]
    checks = [_check("orders_are_square_roots", all(l.order ** 2 == m.order for l in lags))]
    return ({"algebra": a.algebra, "genus": a.genus, "cap": a.cap},
            {"module": m.to_json(), "count": len(lags), "lagrangians": rows}, checks)


def _gamma(m: SymplecticModule, text: Optional[str]) -> Subgroup:
    return duality._as_subgroup(m, parse_matrix(text))


def cmd_annihilator(a) -> Result:
    m = _module(a.algebra, a.genus)
    g = _gamma(m, a.gamma)
    ann = annihilator(g)
    whole = Subgroup(m, frozenset(m.elements()))
    dual_check = quotient_dual_check(g)
    checks = [_check("double_annihilator", annihilator(ann) == g),
              _check("orders_multiply", g.order * ann.order == m.order),
              _check("quotient_dual_is_annihilator", dual_check["ok"])]
    out = {"gamma": g.to_json(), "annihilator": ann.to_json(),
           "quotient": subgroup_quotient(g, whole).to_json(),
           "isotropic": g.elements <= ann.elements, "lagrangian": g == ann}
    return {"algebra": a.algebra, "genus": a.genus, "gamma": parse_matrix(a.gamma)}, out, checks


def cmd_self_dual(a) -> Result:
    m = _module(a.algebra, a.genus)
    g = _gamma(m, a.gamma)
    dec = duality.is_self_dual(a.algebra, a.genus, g)
    checks = []
    if dec:
        checks.append(_check("dual_fixes_skeleton", dec.certificate.get("dual_fixes_skeleton", False)))
    return ({"algebra": a.algebra, "genus": a.genus, "gamma": parse_matrix(a.gamma)},
            {"self_dual": dec.self_dual, "certificate": dec.certificate}, checks)


def cmd_dualize(a) -> Result:
    m = _module(a.algebra, a.genus)
    s = duality.m_skeleton(a.algebra, a.genus, _gamma(m, a.gamma))
    rep = duality.dualize(s)
    inv = duality.involution_check(s)
    checks = [_check(k, v) for k, v in sorted(rep.swap_checks.items())]
    checks.append(_check("involution", inv.ok, inv.details))
    out = {"input": s.to_json(), "dual": rep.dual.to_json(), "swap_checks": rep.swap_checks,
           "certificate": {"involution": inv.details}}
    return {"algebra": a.algebra, "genus": a.genus, "gamma": parse_matrix(a.gamma)}, out, checks


def _lagrangian(m: SymplecticModule, text: Optional[str], flag: str) -> Subgroup:
    if not text:
        raise InputError(f"{flag} is required")
    return heis.lagrangian_from_generators(m, parse_matrix(text))


def cmd_heisenberg(a) -> Result:
    m = _module(a.coefficient, a.genus)
    h = heis.heisenberg(m)
    inputs: Dict[str, Any] = {"coefficient": a.coefficient, "genus": a.genus, "action": a.action}
    out: Dict[str, Any] = {"group": h.to_json()}
    checks: List[Check] = []
    if a.action == "partition":
        if m.order <= RELATION_CHECK_LIMIT:
            checks.append(_check("commutation_relations", not h.relation_failures()))
        v = heis.partition_vector(h)
        com = v.rep.commutant()
        checks.append(_check("irreducible", com.irreducible, {"residue": com.residue, "dimension": com.dimension}))
        out.update({"dimension": v.rep.dimension, "partition_vector": v.to_json()})
    elif a.action == "absolve":
        lag = _lagrangian(m, a.lagrangian, "--lagrangian")
        inputs["lagrangian"] = parse_matrix(a.lagrangian)
        res = heis.absolve(heis.partition_vector(h), lag)
        out.update({"absolution": res.to_json(), "lagrangian": lag.to_json()})
        checks.append(_check("invariant_line_is_one_dimensional", True))
    else:
        lags = [_lagrangian(m, t, f) for t, f in ((a.l1, "--l1"), (a.l2, "--l2"), (a.l3, "--l3"))]
        inputs.update({"l1": parse_matrix(a.l1), "l2": parse_matrix(a.l2), "l3": parse_matrix(a.l3)})
        c = heis.maslov_scalar(h, *lags)
        out.update({"maslov": c.to_json()})
        checks.append(_check("unit_modulus", abs(abs(c.value) - 1) < heis.TOL, {"abs": round(abs(c.value), 12)}))
    return inputs, out, checks


def _parse_dims(text: str) -> duality.GradedDims:
    data: Dict[Tuple[int, int], int] = {}
    try:
        for part in text.split(";"):
            if not part.strip():
                continue
            key, _, count = part.partition("=")
            m_, n_ = (int(x) for x in key.split(","))
            data[(m_, n_)] = data.get((m_, n_), 0) + (int(count) if count.strip() else 1)
        return duality.GradedDims.make(data)
    except ValueError as exc:
        raise InputError(f"cannot parse graded dimensions {text!r}") from exc


def cmd_fm_map(a) -> Result:
    d = _parse_dims(a.dims)
    image = duality.fm_grading_map(d)
    four = d
    for _ in range(4):
        four = duality.fm_grading_map(four)
    rng = random.Random(a.seed)
    failures = []
    for _ in range(a.random_checks):
        sample = duality.GradedDims.make({(rng.randint(-9, 9), rng.randint(-9, 9)): rng.randint(1, 5)
                                          for _ in range(rng.randint(1, 6))})
        x = sample
        for _ in range(4):
            x = duality.fm_grading_map(x)
        if x != sample:
            failures.append(sample.to_json())
    checks = [_check("fourth_iterate_is_identity", four == d),
              _check("random_order_four", not failures, {"samples": a.random_checks, "failures": failures})]
    return {"dims": a.dims, "seed": a.seed, "random_checks": a.random_checks}, {"image": image.to_json()}, checks


def cmd_regressions(a) -> Result:
    rep = duality.regression_suite(only=a.only or None, corrupt_pairing=a.corrupt_pairing)
    checks = [_check(it["name"], it["ok"], {k: v for k, v in it.items() if k not in ("name", "ok")})
              for it in rep["items"]]
    return {"only": a.only or [], "corrupt_pairing": a.corrupt_pairing}, {"failed": rep["failed"]}, checks


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(defaults: bool) -> argparse.ArgumentParser:
        # subcommand copies must not reset flags given before the subcommand
        f = argparse.ArgumentParser(add_help=False)
        pick = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        f.add_argument("--format", choices=("json", "text"), default=pick("json"))
        f.add_argument("--seed", type=int, default=pick(0))
        f.add_argument("--cap", type=int, default=pick(DEFAULT_CAP))
        return f

    common = flags(False)
    p = argparse.ArgumentParser(prog="stackdual", parents=[flags(True)],
                                description="Exact finite checks for Langlands-dual quotient stacks.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("center", cmd_center, "center of a group").add_argument("group")
    add("dual", cmd_dual, "Langlands dual root datum").add_argument("group")
    for name, func, h in (("gtau-verify", cmd_gtau_verify, "verify the extended-group duality"),
                          ("components", cmd_components, "component group of the extended group")):
        sp = add(name, func, h)
        sp.add_argument("group")
        sp.add_argument("--tau", help="embedding matrix; default: every general embedding")
    sp = add("weyl-invariants", cmd_weyl_invariants, "Weyl-invariant torus points")
    sp.add_argument("group")
    sp.add_argument("--brute-denominator", type=int, default=0)
    sp = add("j-sections", cmd_j_sections, "global sections with ramified roots")
    sp.add_argument("group")
    sp.add_argument("--ramified", default="none", help="all, none, or root indices")
    for name, func, h in (("lagrangians", cmd_lagrangians, "enumerate Lagrangian subgroups"),
                          ("annihilator", cmd_annihilator, "annihilator of a subgroup"),
                          ("self-dual", cmd_self_dual, "self-duality decision"),
                          ("dualize", cmd_dualize, "dual skeleton")):
        sp = add(name, func, h)
        sp.add_argument("--algebra", required=True)
        sp.add_argument("--genus", type=int, default=1)
        if name != "lagrangians":
            sp.add_argument("--gamma", default="", help="generators as rows, e.g. '1,0;0,1'")
    sp = add("heisenberg", cmd_heisenberg, "finite Heisenberg data")
    sp.add_argument("--coefficient", required=True, help="group whose center is the coefficient")
    sp.add_argument("--genus", type=int, default=1)
    hs = sp.add_subparsers(dest="action", required=True)
    hs.add_parser("partition", parents=[common])
    ab = hs.add_parser("absolve", parents=[common])
    ab.add_argument("--lagrangian", required=True)
    ms = hs.add_parser("maslov", parents=[common])
    for flag in ("--l1", "--l2", "--l3"):
        ms.add_argument(flag, required=True)
    sp = add("fm-map", cmd_fm_map, "Fourier-Mukai grading map")
    sp.add_argument("--dims", default="-1,1=1", help="'m,n=count;...'")
    sp.add_argument("--random-checks", type=int, default=20)
    sp = add("regressions", cmd_regressions, "built-in example checks")
    sp.add_argument("--only", action="append", choices=duality.REGRESSIONS)
    sp.add_argument("--corrupt-pairing", action="store_true", help="negative control")
    return p


def load_schema(command: str) -> dict:
    """JSON schema for the report of ``command``."""
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    return json.loads(resources.files(__package__).joinpath("schema", f"{command}.json").read_text())


def render_text(report: Dict[str, Any]) -> str:
    lines = [f"command: {report['command']}"]
    for k, v in sorted(report["inputs"].items()):
        lines.append(f"input {k}: {json.dumps(v, sort_keys=True, default=_default)}")
    for k, v in sorted(report["outputs"].items()):
        lines.append(f"{k}: {json.dumps(v, sort_keys=True, default=_default)}")
    for c in report["checks"]:
        lines.append(f"{'PASS' if c['ok'] else 'FAIL'} {c['name']}")
    lines.append(f"ok: {report['ok']}")
    return "\n".join(lines)


def run(argv: Optional[Sequence[str]] = None) -> Tuple[int, Optional[Dict[str, Any]]]:
    """Parse, execute, and return ``(exit status, report)``; nothing is printed."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    start = time.perf_counter()
    try:
        inputs, outputs, checks = args.func(args)
    except InputError as exc:
        print(f"stackdual: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2, None
    ok = all(c["ok"] for c in checks)
    report = {"command": args.command, "inputs": inputs, "outputs": outputs, "checks": checks, "ok": ok,
              "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    # normalize to plain JSON types so the returned report equals what is printed
    report = json.loads(json.dumps(report, sort_keys=True, default=_default))
    report["_format"] = args.format
    return (0 if ok else 1), report


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, report = run(argv)
    if report is not None:
        fmt = report.pop("_format")
        if fmt == "text":
            print(render_text(report))
        else:
            print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
