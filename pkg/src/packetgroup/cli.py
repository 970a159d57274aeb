"""Command-line front end: config ingestion, dispatch, deterministic reports.

Subcommands: validate | sharp | packet-group | cohomology | hilbert |
commutator | oracle-check.  Reports are JSON objects with sorted keys
(or an equally deterministic text rendering), so identical inputs produce
byte-identical output.  Exit codes: 0 success, 2 validation or
configuration error, 3 stabilization failure, 4 internal assertion or
oracle mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Any, Optional

from . import oracle
from .cohomology import ModuleError, TameModule, counting_checks, tame_h
from .datum import DatumError, validate
from .linalg import (FinAbGroup, LatticeError, Mat, Sublattice,
                     quotient_invariants)
from .residue import (ContainmentViolation, NTorsionViolation, NotStabilized,
                      StabilizationPolicy, invariant_points, iota_image,
                      packet_group, packet_group_level)
from .sharp import fixed_lattice, radical_of_induced_form, y_gamma_sharp, y_sharp
from .symbols import SymbolError, TameField, commutator, hilbert

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_STABILIZED = 3
EXIT_INTERNAL = 4


def _digest(payload: Any) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _lattice_rows(lat: Sublattice) -> list[list[int]]:
    return [list(lat.basis.col(j)) for j in range(lat.rank)]


def _group_factors(g: FinAbGroup) -> list[int]:
    return list(g.invariant_factors)


def _load_config(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise DatumError(f"config is not valid JSON: {ex}") from ex


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    lines = []

    def walk(prefix: str, value: Any) -> None:
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}{key}." if prefix else f"{key}.", value[key])
        else:
            lines.append(f"{prefix[:-1]} = {json.dumps(value, sort_keys=True)}")

    walk("", report)
    sys.stdout.write("\n".join(lines) + "\n")


def _base_report(command: str, payload: Any, seed: Optional[int]) -> dict:
    return {"command": command, "input_digest": _digest(payload),
            "seed": seed, "status": "ok"}


def _cmd_validate(args) -> dict:
    config = _load_config(args.config)
    d = validate(config, closure_cap=args.cap)
    report = _base_report("validate", config, args.seed)
    report["results"] = {
        "rank": d.rank,
        "q": d.q,
        "n": d.n,
        "residue_char": d.residue_char,
        "ramification_index": d.e,
        "group_order": d.group_order,
        "group_exponent": d.gamma_exponent,
        "bilinear_form": d.bilinear.to_rows(),
    }
    return report


def _cmd_sharp(args) -> dict:
    config = _load_config(args.config)
    d = validate(config, closure_cap=args.cap)
    fixed = fixed_lattice(d)
    sharp_full = y_sharp(d)
    sharp_gamma = y_gamma_sharp(d)
    report = _base_report("sharp", config, args.seed)
    report["results"] = {
        "fixed_lattice": _lattice_rows(fixed),
        "sharp": _lattice_rows(sharp_full),
        "gamma_sharp": _lattice_rows(sharp_gamma),
        "quotient_by_sharp": _group_factors(
            quotient_invariants(Sublattice.full(d.rank), sharp_full)),
        "gamma_sharp_over_sharp": _group_factors(
            quotient_invariants(sharp_gamma, sharp_full)),
    }
    return report


def _cmd_packet_group(args) -> dict:
    config = _load_config(args.config)
    d = validate(config, closure_cap=args.cap)
    policy = StabilizationPolicy(start_level=args.level,
                                 stable_repeats=args.stable_repeats,
                                 max_level=args.max_level)
    group, trace = packet_group(d, policy)
    report = _base_report("packet-group", config, args.seed)
    report["results"] = {"invariant_factors": _group_factors(group)}
    report["diagnostics"] = {
        "levels_used": [m for m, _ in trace],
        "trace": [{"level": m, "invariant_factors": _group_factors(g)}
                  for m, g in trace],
        "policy": {"start_level": policy.start_level or d.gamma_exponent,
                   "stable_repeats": policy.stable_repeats,
                   "max_level": policy.max_level},
    }
    return report


def _parse_module(config: Any) -> tuple[TameModule, dict]:
    if not isinstance(config, dict):
        raise ModuleError("module description must be a JSON object")
    for key in ("relations", "phi", "q"):
        if key not in config:
            raise ModuleError(f"missing required key {key!r}")
    rel_rows = config["relations"]
    if (not isinstance(rel_rows, list) or not rel_rows
            or not all(isinstance(r, list) for r in rel_rows)):
        raise ModuleError("relations must be a non-empty list of integer vectors")
    rank = len(rel_rows[0])
    relations = Sublattice.from_columns(rank, rel_rows)
    phi = Mat.from_rows(config["phi"], cols=rank)
    sigma_rows = config.get("sigma")
    sigma = Mat.from_rows(sigma_rows, cols=rank) if sigma_rows is not None \
        else Mat.identity(rank)
    e = config.get("e", 1)
    q = config["q"]
    if not isinstance(q, int) or not isinstance(e, int):
        raise ModuleError("q and e must be integers")
    return TameModule(relations, sigma, phi, e, q), config


def _cmd_cohomology(args) -> dict:
    config = _load_config(args.config)
    module, _ = _parse_module(config)
    coh = tame_h(module)
    unr_h0, unr_h1 = coh.h0_unr, coh.h1_unr
    report = _base_report("cohomology", config, args.seed)
    results = {
        "group": _group_factors(module.group()),
        "sizes": {"h0": coh.sizes[0], "h1": coh.sizes[1], "h2": coh.sizes[2]},
        "pieces": {
            "h0_unramified": _group_factors(unr_h0),
            "h1_unramified": _group_factors(unr_h1),
            "h0_twisted": _group_factors(coh.h0_twist),
            "h1_twisted": _group_factors(coh.h1_twist),
        },
    }
    n = args.n if args.n is not None else module.exponent
    try:
        counting = counting_checks(module, n)
        results["counting"] = {
            "n": n,
            "sizes_module": list(counting.sizes_module),
            "sizes_dual": list(counting.sizes_dual),
            "euler_ok": counting.euler_ok,
            "duality_ok": counting.duality_ok,
            "unramified_factorization_ok": counting.unramified_factorization_ok,
            "ok": counting.ok,
        }
    except ModuleError as ex:
        results["counting"] = {"n": n, "skipped": str(ex)}
    report["results"] = results
    return report


def _parse_pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise SymbolError(f"expected 'v,u', got {text!r}")
    return int(parts[0]), int(parts[1])


def _cmd_hilbert(args) -> dict:
    f = TameField(args.q, args.n)
    va, ua = _parse_pair(args.a)
    vb, ub = _parse_pair(args.b)
    value = hilbert(f, f.element(va, ua), f.element(vb, ub))
    payload = {"q": args.q, "n": args.n, "a": [va, ua], "b": [vb, ub]}
    report = _base_report("hilbert", payload, args.seed)
    report["results"] = {"value": value}
    return report


def _cmd_commutator(args) -> dict:
    f = TameField(args.q, args.n)
    try:
        b_rows = json.loads(args.form)
        s_pairs = json.loads(args.s)
        t_pairs = json.loads(args.t)
    except json.JSONDecodeError as ex:
        raise SymbolError(f"matrix and element lists must be JSON: {ex}") from ex
    b = Mat.from_rows(b_rows)
    s = [f.element(v, u) for v, u in s_pairs]
    t = [f.element(v, u) for v, u in t_pairs]
    value = commutator(f, b, s, t)
    payload = {"q": args.q, "n": args.n, "B": b_rows, "s": s_pairs, "t": t_pairs}
    report = _base_report("commutator", payload, args.seed)
    report["results"] = {"value": value}
    return report


def _cmd_oracle_check(args) -> dict:
    config = _load_config(args.config)
    d = validate(config, closure_cap=args.cap)
    if args.oracle_cap is None:
        args.oracle_cap = args.cap
    m = args.level if args.level is not None else 1
    n_mod = d.q ** m - 1
    checks: list[dict] = []

    def record(name: str, agree: bool, main_repr: Any, oracle_repr: Any) -> None:
        checks.append({"check": name, "agree": agree,
                       "main": main_repr, "oracle": oracle_repr})

    lattices = {"full": Sublattice.full(d.rank),
                "sharp": y_sharp(d), "gamma_sharp": y_gamma_sharp(d)}
    for name in sorted(lattices):
        sub = lattices[name]
        lg = invariant_points(d, sub, m)
        gens = [lg.lattice.basis.col(j) for j in range(lg.lattice.rank)]
        main_set = oracle.subgroup_from_generators(n_mod, sub.rank, gens,
                                                   cap=args.oracle_cap)
        brute = oracle.brute_invariant_points(d, sub, m, cap=args.oracle_cap)
        record(f"invariant_points[{name}]", main_set == brute,
               len(main_set), len(brute))
        img = iota_image(d, sub, m)
        img_gens = [img.lattice.basis.col(j) for j in range(img.lattice.rank)]
        main_img = oracle.subgroup_from_generators(n_mod, d.rank, img_gens,
                                                   cap=args.oracle_cap)
        brute_img = oracle.brute_iota_image(d, sub, m, cap=args.oracle_cap)
        record(f"iota_image[{name}]", main_img == brute_img,
               len(main_img), len(brute_img))

    level_group = packet_group_level(d, m)
    brute_group = oracle.brute_quotient(
        n_mod,
        oracle.brute_iota_image(d, lattices["gamma_sharp"], m, cap=args.oracle_cap),
        oracle.brute_iota_image(d, lattices["sharp"], m, cap=args.oracle_cap),
        cap=args.oracle_cap)
    record("packet_group_level", level_group == brute_group,
           _group_factors(level_group), _group_factors(brute_group))

    radical = radical_of_induced_form(d, lattices["sharp"], lattices["sharp"])
    brute_rad = oracle.brute_radical(d.bilinear.to_rows(), d.n, cap=args.oracle_cap)
    sharp_gens = [lattices["sharp"].basis.col(j)
                  for j in range(lattices["sharp"].rank)]
    sharp_set = oracle.subgroup_from_generators(d.n, d.rank, sharp_gens,
                                                cap=args.oracle_cap)
    record("radical", radical.is_trivial and sharp_set == brute_rad,
           _group_factors(radical), len(brute_rad))

    report = _base_report("oracle-check", config, args.seed)
    report["results"] = {"level": m, "checks": checks,
                        "all_agree": all(c["agree"] for c in checks)}
    if not report["results"]["all_agree"]:
        report["status"] = "mismatch"
        raise OracleMismatchReport(report)
    return report


class OracleMismatchReport(RuntimeError):
    def __init__(self, report: dict):
        super().__init__("main path and oracle disagree")
        self.report = report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None,
                        help="echoed into reports for reproducible bookkeeping")
    parser = argparse.ArgumentParser(
        prog="packetgroup",
        description="Exact packet-group and lattice computations for torus covers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_config_command(name, fn, **extra):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("config", help="path to a JSON config, or - for stdin")
        p.add_argument("--cap", type=int, default=10 ** 6,
                       help="group-closure cap")
        for flag, kw in extra.items():
            p.add_argument(flag, **kw)
        p.set_defaults(handler=fn)
        return p

    add_config_command("validate", _cmd_validate)
    add_config_command("sharp", _cmd_sharp)
    add_config_command(
        "packet-group", _cmd_packet_group,
        **{"--level": dict(type=int, default=None,
                           help="start level (default: group exponent)"),
           "--max-level": dict(type=int, default=4096, dest="max_level"),
           "--stable-repeats": dict(type=int, default=3, dest="stable_repeats")})
    coh = sub.add_parser("cohomology", parents=[common])
    coh.add_argument("config", help="module JSON: relations, sigma, phi, q, e")
    coh.add_argument("--n", type=int, default=None,
                     help="degree for the counting identities (default: exponent)")
    coh.set_defaults(handler=_cmd_cohomology)

    hil = sub.add_parser("hilbert", parents=[common])
    hil.add_argument("--q", type=int, required=True)
    hil.add_argument("--n", type=int, required=True)
    hil.add_argument("--a", required=True, help="element as 'v,u'")
    hil.add_argument("--b", required=True, help="element as 'v,u'")
    hil.set_defaults(handler=_cmd_hilbert)

    com = sub.add_parser("commutator", parents=[common])
    com.add_argument("--q", type=int, required=True)
    com.add_argument("--n", type=int, required=True)
    com.add_argument("--form", required=True, help="JSON matrix of the form")
    com.add_argument("--s", required=True, help="JSON list of [v,u] pairs")
    com.add_argument("--t", required=True, help="JSON list of [v,u] pairs")
    com.set_defaults(handler=_cmd_commutator)

    add_config_command(
        "oracle-check", _cmd_oracle_check,
        **{"--level": dict(type=int, default=None),
           "--oracle-cap": dict(type=int, default=None, dest="oracle_cap",
                                help="enumeration cap (default: the --cap value)")})
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    def error_report(kind: str, message: str) -> dict:
        return {"command": args.subcommand, "status": "error",
                "error": {"kind": kind, "message": message}}

    try:
        report = args.handler(args)
    except OracleMismatchReport as ex:
        _emit(ex.report, args.format)
        return EXIT_INTERNAL
    except NotStabilized as ex:
        report = error_report("NotStabilized", str(ex))
        report["trace"] = [{"level": m, "invariant_factors": list(g.invariant_factors)}
                           for m, g in ex.trace]
        _emit(report, args.format)
        return EXIT_NOT_STABILIZED
    except (ContainmentViolation, NTorsionViolation) as ex:
        _emit(error_report(type(ex).__name__, str(ex)), args.format)
        return EXIT_INTERNAL
    except (DatumError, ModuleError, SymbolError, LatticeError,
            oracle.CapExceeded, ValueError) as ex:
        _emit(error_report(type(ex).__name__, str(ex)), args.format)
        return EXIT_CONFIG
    except OSError as ex:
        _emit(error_report("IOError", str(ex)), args.format)
        return EXIT_CONFIG
    _emit(report, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
