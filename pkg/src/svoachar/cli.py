"""Command-line entry point: ``svoachar <subcommand> ...``.

Exit status is 0 when every asserted property holds, 1 when a check fails
(a JSON failure record goes to stdout) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds, monster
from .feasibility import INFEASIBLE, replay
from .modchar import (
    MT_CLASSES,
    central_charge,
    chi_half,
    chi_half_tilde,
    eta,
    j_invariant,
    mckay_thompson,
    n1_vacuum,
    verma_generic,
    virasoro_vacuum,
)
from .qseries import TICKS_PER_Q, PrecisionError, QSeries, as_rational, format_series
from .svoa import N1, SVOA, CharacterSpec, character, shadow

SERIES = (
    "chi-half",
    "chi-half-tilde",
    "virasoro-vacuum",
    "n1-vacuum",
    "verma",
    "eta",
    "j",
    "J",
    "mckay-thompson",
    "character",
    "shadow",
    "extremal-n1",
    "extremal-n1-shadow",
    "extremal-voa",
)


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, record):
        super().__init__(record.get("reason", "check failed"))
        self.record = record


def _rational(text) -> Fraction:
    try:
        return Fraction(as_rational(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _half_integer(text) -> Fraction:
    x = _rational(text)
    if (2 * x).denominator != 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not a multiple of 1/2")
    return x


def _central(text) -> Fraction:
    x = _half_integer(text)
    if x <= 0:
        raise argparse.ArgumentTypeError("central charge must be positive")
    return x


def _positive_int(text) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _fs(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _default_terms() -> int:
    raw = os.environ.get("SVOA_TERMS")
    if raw:
        try:
            return _positive_int(raw)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"SVOA_TERMS: {exc}") from None
    return 8


def _options(args) -> bounds.Options:
    return bounds.Options(
        depth_char=args.depth_char,
        depth_shadow=args.depth_shadow,
        primary_check=args.primary_check,
        cap=args.enum_cap,
    )


def _emit(out, payload, fmt, text=None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write((text if text is not None else json.dumps(payload, indent=2)) + "\n")


# -- expand ------------------------------------------------------------------


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.series}")
    return value


def _build_series(args, ticks) -> QSeries:
    s = args.series
    if s == "chi-half":
        return chi_half(ticks)
    if s == "chi-half-tilde":
        return chi_half_tilde(ticks)
    if s == "virasoro-vacuum":
        return virasoro_vacuum(_need(args, "c"), ticks)
    if s == "n1-vacuum":
        return n1_vacuum(_need(args, "c"), ticks)
    if s == "verma":
        return verma_generic(_need(args, "c"), _need(args, "h"), args.sector, ticks)
    if s == "eta":
        return eta(args.scale, ticks)
    if s in ("j", "J"):
        return j_invariant(s == "J", ticks)
    if s == "mckay-thompson":
        return mckay_thompson(args.cls or "1A", ticks)
    if s in ("character", "shadow"):
        c = _need(args, "c")
        if not args.a:
            raise UsageError("--a is required (comma-separated basis coefficients)")
        a = tuple(_rational(x) for x in args.a.split(","))
        spec = CharacterSpec(c, args.mode, a)
        return (character if s == "character" else shadow)(spec, ticks)
    if s in ("extremal-n1", "extremal-n1-shadow"):
        chi, sh = bounds.extremal_n1(_need(args, "c"), ticks)
        return chi if s == "extremal-n1" else sh
    if s == "extremal-voa":
        return monster.extremal_voa_character(ticks)
    raise UsageError(f"unknown series {s!r}")


def cmd_expand(args, out):
    terms = args.terms if args.terms is not None else _default_terms()
    series = _build_series(args, TICKS_PER_Q * terms + 1)
    _emit(out, series.to_json_dict(), args.format, format_series(series))
    return 0


# -- solve -------------------------------------------------------------------


def cmd_solve(args, out):
    res = bounds.test_min_weight_exceeds(args.c, args.mu, _options(args))
    payload = {"c": _fs(args.c), "mu": _fs(args.mu), **res.to_json()}
    if res.status == INFEASIBLE:
        replay(res.certificate)
    lines = [f"c = {_fs(args.c)}, minimal weight > {_fs(args.mu)}: {res.status}"]
    if res.witness is not None:
        lines.append("witness: " + ", ".join(f"a{k} = {v}" for k, v in sorted(res.witness.items())) or "-")
    lines += [f"  {i + 1}. {s.description}" for i, s in enumerate(res.certificate)]
    _emit(out, payload, args.format, "\n".join(lines))
    return 0


# -- table -------------------------------------------------------------------


def cmd_table(args, out):
    reports = bounds.table_sweep(args.c_from, args.c_to, args.step, _options(args), args.workers)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["c", "mu_upper", "annotation"])
        for r in reports:
            w.writerow([_fs(r.c), "" if r.analytic_mu_max is None else _fs(r.analytic_mu_max), r.annotation])
        out.write(buf.getvalue())
    elif args.format == "json":
        _emit(out, [r.to_json() for r in reports], "json")
    else:
        for r in reports:
            mu = "?" if r.analytic_mu_max is None else _fs(r.analytic_mu_max)
            note = "" if r.annotation == "none" else f"  [{r.annotation}]"
            out.write(f"c = {_fs(r.c):>5}  mu <= {mu}{note}\n")
    bad = [r for r in reports if r.status != INFEASIBLE]
    if bad:
        raise CheckFailed({"reason": "inconclusive sweep entries", "c": [_fs(r.c) for r in bad]})
    return 0


# -- verify ------------------------------------------------------------------


def _report_out(rep, args, out):
    payload = rep.to_json()
    text = [rep.title]
    text += [f"  [{'ok' if ch.ok else 'FAIL'}] {ch.name}: {ch.detail}" for ch in rep.checks]
    _emit(out, payload, args.format, "\n".join(text))
    if not rep.ok:
        raise CheckFailed({"reason": "failed checks", "title": rep.title,
                           "failed": [ch.to_json() for ch in rep.checks if not ch.ok]})
    return 0


def cmd_verify(args, out):
    what = args.what
    if what == "newbound":
        return _report_out(bounds.verify_newbound(_need(args, "c")), args, out)
    if what == "coeffpos":
        rep = bounds.verify_coeffpos(_need(args, "c"), args.n)
        payload = rep.to_json()
        first = rep.values["first_nonpositive"]
        text = "all positive" if first is None else rep.checks[0].detail
        _emit(out, payload, args.format, text)
        if first is not None:
            raise CheckFailed({"reason": text, "c": _fs(rep.values["c"])})
        return 0
    if what == "maxodd":
        res = bounds.verify_maxodd(_need(args, "c"), _options(args))
        ok = res.status == INFEASIBLE and replay(res.certificate)
        lines = [f"c = {_fs(args.c)}: {res.status}"]
        lines += [f"  {i + 1}. {s.description}" for i, s in enumerate(res.certificate)]
        _emit(out, res.to_json(), args.format, "\n".join(lines))
        if not ok:
            raise CheckFailed({"reason": "expected an infeasible system", "status": res.status})
        return 0
    if what == "n1":
        return _report_out(bounds.verify_n1_bound(_need(args, "c")), args, out)
    if what == "noneighbour":
        rep = bounds.noneighbour_check(_options(args))
        lines = [f"{len(rep.families)} families"]
        for i, f in sorted(rep.families.items()):
            lines.append(f"  family {i}: character {', '.join(map(str, f['character']))}; "
                         f"shadow {', '.join(map(str, f['shadow']))}")
        _emit(out, rep.to_json(), args.format, "\n".join(lines))
        if not rep.ok:
            raise CheckFailed({"reason": "expected exactly the two known families"})
        return 0
    raise UsageError(f"unknown check {what!r}")


# -- monster -----------------------------------------------------------------


def _load_data(args):
    if args.data:
        return monster.load_monster_data(args.data)
    return monster.default_data()


def cmd_monster(args, out):
    data = _load_data(args)
    if args.action == "obstruction":
        rep = monster.obstruction_pipeline_c48(args.cls, data=data)
        text = f"{rep['class']}: {rep['verdict']}\nassumptions:\n" + "\n".join(
            f"  - {a}" for a in rep["assumptions"])
        _emit(out, rep, args.format, text)
        return 0
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            obj = json.load(fh)
        dec = monster.Decomposition.from_json(obj)
        series = obj.get("series", "extremal-n1")
        base = _rational(obj.get("base_exponent", "-2"))
    else:
        which = args.builtin
        dec = monster.V_DECOMPOSITION if which == "V" else monster.VPRIME_DECOMPOSITION
        series = "extremal-n1" if which == "V" else "extremal-n1-shadow"
        base = Fraction(-2)
    if isinstance(series, dict):
        chi = QSeries.from_json_dict(series)
    else:
        chi, sh = bounds.extremal_n1(48, 8 * TICKS_PER_Q)
        chi = {"extremal-n1": chi, "extremal-n1-shadow": sh}.get(series)
        if chi is None:
            raise UsageError(f"unknown series {series!r}")
    rows = monster.check_decomposition(dec, chi, base, data)
    payload = {"base_exponent": _fs(base), "entries": [r.to_json() for r in rows],
               "all_match": all(r.match for r in rows)}
    text = "\n".join(
        f"{'ok ' if r.match else 'MISMATCH'} degree {_fs(r.degree)} (label {r.label}): "
        f"{r.total} vs {r.expected}" for r in rows)
    _emit(out, payload, args.format, text)
    if not payload["all_match"]:
        raise CheckFailed({"reason": "decomposition sums differ from the character",
                           "mismatched": [r.to_json() for r in rows if not r.match]})
    return 0


# -- parser ------------------------------------------------------------------


def _feasibility_flags(p):
    p.add_argument("--depth-char", type=_positive_int, default=16,
                   help="half-integer character steps checked past the fixed range (default 16)")
    p.add_argument("--depth-shadow", type=_positive_int, default=8,
                   help="shadow steps checked beyond the free parameters (default 8)")
    p.add_argument("--enum-cap", type=_positive_int, default=10**6,
                   help="search-node cap before giving up as Inconclusive (default 10^6)")
    p.add_argument("--primary-check", action="store_true",
                   help="also require nonnegative primary multiplicities")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="svoachar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a named q-series")
    p.add_argument("series", choices=SERIES)
    p.add_argument("--c", type=_central)
    p.add_argument("--h", type=_half_integer)
    p.add_argument("--sector", choices=("plain", "NS"), default="plain")
    p.add_argument("--scale", type=_positive_int, default=1)
    p.add_argument("--class", dest="cls", choices=MT_CLASSES)
    p.add_argument("--a", help="comma-separated basis coefficients a_0,...,a_k")
    p.add_argument("--mode", choices=(SVOA, N1), default=SVOA)
    p.add_argument("--terms", type=_positive_int,
                   help="powers of q past the leading term (default $SVOA_TERMS or 8)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("solve", help="can the minimal weight exceed mu?")
    p.add_argument("--c", type=_central, required=True)
    p.add_argument("--mu", type=_half_integer, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    _feasibility_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="upper bounds on the minimal weight over a range of c")
    p.add_argument("--from", dest="c_from", type=_central, default=Fraction(1, 2))
    p.add_argument("--to", dest="c_to", type=_central, default=Fraction(48))
    p.add_argument("--step", type=_central, default=Fraction(1, 2))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    _feasibility_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run one of the bound verifiers")
    p.add_argument("what", choices=("newbound", "coeffpos", "maxodd", "n1", "noneighbour"))
    p.add_argument("--c", type=_rational)
    p.add_argument("--n", type=_positive_int, default=3000, help="coefficients scanned by coeffpos")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _feasibility_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("monster", help="monster-module checks at c = 48")
    p.add_argument("action", choices=("obstruction", "check-decomposition"))
    p.add_argument("--class", dest="cls", choices=("1A", "2A", "2B"), default="2A")
    p.add_argument("--input", help="decomposition JSON file")
    p.add_argument("--builtin", choices=("V", "Vprime"), default="V")
    p.add_argument("--data", help="monster CSV overriding the embedded table")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_monster)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "c", None) is not None and args.command in ("verify",) and args.what != "coeffpos":
            args.c = central_charge(args.c)
        return args.func(args, out)
    except CheckFailed as exc:
        out.write(json.dumps({"status": "failed", **exc.record}) + "\n")
        return 1
    except PrecisionError as exc:
        out.write(json.dumps({"status": "failed", "reason": f"precision exhausted: {exc}"}) + "\n")
        return 1
    except AssertionError as exc:
        out.write(json.dumps({"status": "failed", "reason": f"certificate replay: {exc}"}) + "\n")
        return 1
    except (UsageError, monster.MonsterDataError, ValueError) as exc:
        sys.stderr.write(f"svoachar: error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
