"""Command-line front end.

Every subcommand produces one :class:`CheckReport`.  ``--json`` prints it
(plus the effective configuration) as canonical JSON; otherwise a short
human-readable summary is printed.  Exit codes: 0 all pass, 1 any fail,
2 usage or configuration error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .averages import IndexStream, generate, mass_bound_check
from .config import Budget, Config, config_from_mapping, load_config
from .errors import BudgetExceeded, ConfigError, SchreierLabError
from .norms import BlockSequence, Norm, baernstein_norm, check_domination, composite_norm, schreier_norm
from .ordinal import Ordinal, parse_ordinal
from .report import FAIL, INFO, PASS, CheckReport, canonical_dumps, timed
from .schreier import SchreierFamily, format_set, greedy_decomposition, parse_set
from .szlenk import TreeCertificate, enumerate_branches, szlenk_witness, threshold_report, verify_branch_lower
from .values import Exponent, RationalVector, as_fraction

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ----------------------------------------------------------

def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return text


def _vector(text: str) -> RationalVector:
    try:
        return RationalVector.from_json(_read_arg(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"--vec: invalid JSON: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"--vec: {exc}") from None


def _blocks(text: str) -> BlockSequence:
    try:
        data = json.loads(_read_arg(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"--blocks: invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise UsageError("--blocks: expected a JSON list of vectors")
    try:
        return BlockSequence(tuple(RationalVector.from_json(z) for z in data))
    except ValueError as exc:
        raise UsageError(f"--blocks: {exc}") from None


def _stream(args: argparse.Namespace, growth3: bool) -> IndexStream:
    if args.stream:
        try:
            data = json.loads(_read_arg(args.stream))
        except json.JSONDecodeError as exc:
            raise UsageError(f"--stream: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("--stream: expected an object such as {\"prefix\": [1, 3, 9], \"ratio\": 3}")
        return IndexStream.from_mapping(data, growth3=growth3)
    return IndexStream.geometric(args.start, args.ratio, growth3=growth3)


def _positions(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace("{", "").replace("}", "").split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad position list {text!r}; use 1,2,5") from None


def _budget_flag(name: str) -> str:
    return "--budget-" + name.replace("_", "-")


def _common() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    parent.add_argument("--json", action="store_true", help="print the report as canonical JSON")
    parent.add_argument("--config", metavar="PATH", help="YAML or JSON configuration file")
    parent.add_argument("--seed", type=int, help="seed for sampled coefficients (unsigned 64-bit)")
    for f in dataclasses.fields(Budget):
        parent.add_argument(_budget_flag(f.name), dest=f"budget_{f.name}", metavar="N" if f.name != "tolerance" else "Q")
    return parent


def _effective_config(args: argparse.Namespace) -> Config:
    cfg = load_config(args.config)
    overrides: dict[str, Any] = {}
    for f in dataclasses.fields(Budget):
        raw = getattr(args, f"budget_{f.name}", None)
        if raw is None:
            continue
        if f.name == "tolerance":
            overrides[f.name] = raw
        else:
            try:
                overrides[f.name] = int(raw)
            except ValueError:
                raise ConfigError(f"{_budget_flag(f.name)}: expected a positive integer, got {raw!r}") from None
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = config_from_mapping(overrides, base=cfg)
    return cfg


# -- subcommands ---------------------------------------------------------------

def _alpha(args: argparse.Namespace, cfg: Config) -> Ordinal:
    return parse_ordinal(args.alpha, ceiling=cfg.ordinal_ceiling)


def cmd_schreier_check(args, cfg):
    alpha = _alpha(args, cfg)
    E = parse_set(args.set)
    family = SchreierFamily(alpha, scan_cap=cfg.budget.limit_scan_cap, probe_window=cfg.budget.probe_window)
    member = family.is_member(E)
    report = CheckReport("schreier.check", INFO, {"alpha": str(alpha), "set": format_set(E)})
    report.observe("member", member)
    if member:
        report.observe("decomposition", [format_set(F) for F in greedy_decomposition(alpha, E, cfg.budget.limit_scan_cap)])
        if E:
            report.observe("maximal", family.is_maximal(E))
    return report


def cmd_schreier_enumerate(args, cfg):
    alpha = _alpha(args, cfg)
    family = SchreierFamily(alpha, enum_ceiling=cfg.budget.enum_ceiling, scan_cap=cfg.budget.limit_scan_cap)
    members = family.enumerate(args.N)
    report = CheckReport("schreier.enumerate", INFO, {"alpha": str(alpha), "N": args.N})
    report.observe("count", len(members))
    report.observe("nonempty_count", len(members) - 1)
    report.observe("members", [format_set(E) for E in members])
    return report


def cmd_schreier_audit(args, cfg):
    alpha = _alpha(args, cfg)
    family = SchreierFamily(alpha, enum_ceiling=cfg.budget.enum_ceiling, scan_cap=cfg.budget.limit_scan_cap)
    return family.audit(args.N)


def cmd_averages_generate(args, cfg):
    alpha = _alpha(args, cfg)
    stream = _stream(args, growth3=False)
    with timed() as ms:
        prefix = generate(alpha, stream, args.count, budget=cfg.budget)
        report = CheckReport("averages.generate", PASS, {"alpha": str(alpha), "stream": stream.to_json(), "count": args.count})
        report.observe("vectors", prefix.vectors)
        report.observe("stream_elements_used", prefix.consumed)
        report.observe("invariants", "convex, successive, initial segment, maximal")
    report.runtime_ms = ms[0]
    return report


def cmd_averages_mass_bound(args, cfg):
    alpha = _alpha(args, cfg)
    stream = _stream(args, growth3=True)
    prefix = generate(alpha, stream, args.count, budget=cfg.budget)
    n_sum = args.count if args.n_sum is None else args.n_sum
    return mass_bound_check(prefix, n_sum, args.truncation, budget=cfg.budget)


def _norm_report(name: str, params: dict, value) -> CheckReport:
    report = CheckReport(name, INFO, params)
    report.observe("norm", value.with_witness(None))
    if value.mode == "pth-power":
        report.observe("pth_power", value.power)
    if value.witness is not None:
        report.observe("witness", value.witness)
    return report


def cmd_norm_schreier(args, cfg):
    alpha = _alpha(args, cfg)
    x = _vector(args.vec)
    with timed() as ms:
        value = schreier_norm(alpha, x, budget=cfg.budget, engine=args.engine)
        report = _norm_report("norm.schreier", {"alpha": str(alpha), "vector": x, "engine": args.engine}, value)
    report.runtime_ms = ms[0]
    return report


def cmd_norm_baernstein(args, cfg):
    alpha = _alpha(args, cfg)
    p = Exponent.parse(args.p)
    x = _vector(args.vec)
    with timed() as ms:
        value = baernstein_norm(alpha, p, x, budget=cfg.budget, engine=args.engine)
        report = _norm_report("norm.baernstein", {"alpha": str(alpha), "p": p, "vector": x, "engine": args.engine}, value)
    report.runtime_ms = ms[0]
    return report


def cmd_norm_composite(args, cfg):
    inner, outer = Norm.parse(args.inner), Norm.parse(args.outer)
    x = _vector(args.vec)
    with timed() as ms:
        value = composite_norm(inner, outer, x, budget=cfg.budget)
        report = _norm_report("norm.composite", {"inner": str(inner), "outer": str(outer), "vector": x}, value)
    report.runtime_ms = ms[0]
    return report


def cmd_dominate(args, cfg):
    blocks = _blocks(args.blocks)
    upper = Norm.parse(args.upper_norm)
    lower = Norm.parse(args.lower_norm) if args.lower_norm else upper
    positions = _positions(args.positions) if args.positions else list(blocks.minima)
    return check_domination(
        blocks, upper, positions, lower, as_fraction(args.C),
        normalize=args.normalize, seed=cfg.seed, samples=args.samples, budget=cfg.budget,
    )


def cmd_szlenk_branches(args, cfg):
    cert = TreeCertificate(_alpha(args, cfg), args.N)
    branches = enumerate_branches(cert, budget=cfg.budget)
    report = CheckReport("szlenk.branches", INFO, {"alpha": str(cert.alpha), "N": args.N, "rule": "canonical"})
    report.observe("count", len(branches))
    report.observe("branches", [[format_set(E) for E in b] for b in branches])
    return report


def cmd_szlenk_verify(args, cfg):
    cert = TreeCertificate(_alpha(args, cfg), args.N, as_fraction(args.rho))
    norm = Norm.baernstein(cert.alpha, args.p)
    return verify_branch_lower(cert, norm, samples=args.samples, seed=cfg.seed, budget=cfg.budget)


def cmd_szlenk_threshold(args, cfg):
    return threshold_report(as_fraction(args.rho), args.p)


def cmd_szlenk_witness(args, cfg):
    return szlenk_witness(_alpha(args, cfg), args.p, args.i1, budget=cfg.budget)


def cmd_verify_all(args, cfg):
    from .verify import ALL_NAMES, run_all

    names = None
    if args.only:
        names = [n.strip() for n in args.only.split(",") if n.strip()]
        unknown = [n for n in names if n not in ALL_NAMES]
        if unknown:
            raise UsageError(f"--only: unknown criteria {', '.join(unknown)}; choose from {', '.join(ALL_NAMES)}")
    return run_all(cfg, names)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="schreierlab", description="Schreier families, repeated averages and Schreier-type norms.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, fn, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    def alpha_arg(p):
        p.add_argument("--alpha", required=True, help="ordinal literal, e.g. 'w*2+1'")

    sch = top.add_parser("schreier", help="membership, enumeration and audits").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = sub(sch, "check", cmd_schreier_check, "is E in S_alpha?")
    alpha_arg(p)
    p.add_argument("--set", required=True, help="finite set such as '{2,3,7}'")
    for name, fn, text in (("enumerate", cmd_schreier_enumerate, "members inside {1..N}"),
                           ("audit", cmd_schreier_audit, "hereditary/spreading audit on {1..N}")):
        p = sub(sch, name, fn, text)
        alpha_arg(p)
        p.add_argument("--N", type=int, required=True)

    avg = top.add_parser("averages", help="repeated averages").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn, text in (("generate", cmd_averages_generate, "first COUNT averages"),
                           ("mass-bound", cmd_averages_mass_bound, "max l1 mass of E(x_1 + ... + x_n) over members E")):
        p = sub(avg, name, fn, text)
        alpha_arg(p)
        p.add_argument("--stream", help='JSON such as {"prefix": [1, 3, 9], "rule": "geometric", "ratio": 3}')
        p.add_argument("--start", type=int, default=1, help="first stream element when --stream is absent")
        p.add_argument("--ratio", type=int, default=3)
        p.add_argument("--count", type=int, default=1, help="number of averages")
        if name == "mass-bound":
            p.add_argument("--n-sum", type=int, help="sum the first n averages (default: all)")
            p.add_argument("--truncation", type=int, help="enumerate members inside {1..T} instead of the exact maximum")

    nrm = top.add_parser("norm", help="exact norm evaluation").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("schreier", cmd_norm_schreier), ("baernstein", cmd_norm_baernstein)):
        p = sub(nrm, name, fn, f"{name} norm of a vector")
        alpha_arg(p)
        if name == "baernstein":
            p.add_argument("--p", required=True, help="exponent: rational >= 1 or 'inf'")
        p.add_argument("--vec", required=True, help="RationalVector JSON or @file")
        p.add_argument("--engine", default="auto", choices=("auto", "enumerate", "structural"))
    p = sub(nrm, "composite", cmd_norm_composite, "interval-blocking composition of two norms")
    p.add_argument("--inner", required=True, help="schreier:A, baernstein:A:P or lp:P")
    p.add_argument("--outer", required=True, help="schreier:A, baernstein:A:P or lp:P")
    p.add_argument("--vec", required=True)

    p = top.add_parser("dominate", parents=[common], help="search for a violation of an upper estimate")
    p.set_defaults(func=cmd_dominate)
    p.add_argument("--blocks", required=True, help="JSON list of successive RationalVectors, or @file")
    p.add_argument("--upper-norm", required=True)
    p.add_argument("--lower-norm", help="defaults to the upper norm")
    p.add_argument("--positions", help="lower basis positions, default: the block minima")
    p.add_argument("--C", required=True, help="constant (rational)")
    p.add_argument("--normalize", action="store_true", help="divide each block by its norm")
    p.add_argument("--samples", type=int, help="random coefficient vectors (default: config)")

    sz = top.add_parser("szlenk", help="tree certificates and averaging witnesses").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = sub(sz, "branches", cmd_szlenk_branches, "branches of the canonical tree inside {1..N}")
    alpha_arg(p)
    p.add_argument("--N", type=int, required=True)
    p = sub(sz, "verify", cmd_szlenk_verify, "lower estimate along every branch")
    alpha_arg(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--rho", default="1")
    p.add_argument("--samples", type=int)
    p = sub(sz, "threshold", cmd_szlenk_threshold, "least i with the averaging contradiction")
    p.add_argument("--rho", required=True)
    p.add_argument("--p", required=True)
    p = sub(sz, "witness", cmd_szlenk_witness, "mass and norm of the averaging witness")
    alpha_arg(p)
    p.add_argument("--p", required=True)
    p.add_argument("--i1", type=int, required=True)

    ver = top.add_parser("verify", help="acceptance suite").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = sub(ver, "all", cmd_verify_all, "run every criterion and the determinism re-run")
    p.add_argument("--only", help="comma-separated criterion names")
    return parser


# -- output ------------------------------------------------------------------------

def _render(value: Any) -> str:
    if isinstance(value, (str, int)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, Fraction) or hasattr(value, "mode"):
        return str(value)
    return canonical_dumps(value)


def _print_report(report: CheckReport) -> None:
    print(f"{report.check_name}: {report.status}")
    for label, value in report.observed:
        print(f"  {label}: {_render(value)}")
    for w in report.witnesses[:5]:
        print(f"  witness: {canonical_dumps(w)}")
    for note in report.notes:
        print(f"  note: {note}")


def _emit(result, cfg: Config, as_json: bool) -> None:
    from .verify import SuiteResult

    if isinstance(result, SuiteResult):
        if as_json:
            data = result.to_json()
            data["config"] = cfg.to_json()
            print(canonical_dumps(data))
        else:
            for r in result.reports:
                print(f"{r.check_name}: {r.status}")
            print(f"verify.all: {result.summary.status}  canonical sha256 {result.digest()}")
        return
    if as_json:
        data = result.to_json()
        data["config"] = cfg.to_json()
        print(canonical_dumps(data))
    else:
        _print_report(result)


def _error(kind: str, message: str, as_json: bool, code: int) -> int:
    if as_json:
        print(canonical_dumps({"error": {"kind": kind, "message": message, "exit_code": code}}))
    print(f"error: {message}", file=sys.stderr)
    return code


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        cfg = _effective_config(args)
        result = args.func(args, cfg)
    except UsageError as exc:
        return _error("usage", str(exc), as_json, EXIT_USAGE)
    except ConfigError as exc:
        return _error("config", str(exc), as_json, EXIT_USAGE)
    except BudgetExceeded as exc:
        return _error("budget", str(exc), as_json, EXIT_BUDGET)
    except (SchreierLabError, ValueError) as exc:
        return _error("usage", str(exc), as_json, EXIT_USAGE)
    _emit(result, cfg, as_json)
    status = result.summary.status if hasattr(result, "summary") else result.status
    return EXIT_FAIL if status == FAIL else EXIT_PASS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
