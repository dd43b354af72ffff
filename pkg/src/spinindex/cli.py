"""Command-line driver: build a case, verify its spin structure, compute the
spin indices of the powers of its symmetry and print a report.

    spinindex run --case davis --powers all --output json
    spinindex cache build --path davis.cache

Every flag has an environment default SPINIDX_<FLAG> (for instance
SPINIDX_CASE=decagon); a flag given on the command line wins.

Exit codes: 0 success, 1 usage error, 2 construction failure,
3 verification failure, 4 index inconsistency.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import cache as cache_mod
from .casestudies import (CaseStudy, ConstructionError, davis_case, decagon_case, normalizer_check,
                          sign_flip_breaks, verify_presentation)
from .hypgeom import AngleMatchFailure, NotElliptic, NotFiniteOrder
from .indexengine import (AngleOutOfRange, NonIntegralCoefficient, NonIsolatedFixedPoint,
                          NonRealTrace, NonTermination, NotUnitSign, character_poly,
                          default_labels, dim_lower_bound, epsilon, fixed_points, spin_index)
from .numfield import ComplexValue, RationalAngle, TowerElement, root_of_unity
from .spinrep import eta2, eta4

log = logging.getLogger("spinindex")

ENV_PREFIX = "SPINIDX_"
ORDERS = {"decagon": 5, "davis": 15}
EXIT_OK, EXIT_USAGE, EXIT_CONSTRUCTION, EXIT_VERIFY, EXIT_INDEX = 0, 1, 2, 3, 4
DIGITS = 50


class UsageError(ValueError):
    pass


class IndexInconsistency(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    case: str = "davis"
    powers: tuple = ()
    output: str = "text"
    cache_path: str | None = None
    verify_level: str = "fast"
    threads: int = 1

    @property
    def order(self) -> int:
        return ORDERS[self.case]


def parse_powers(text: str, N: int) -> tuple:
    """'all', a single k, a comma list or ranges like 1-5."""
    text = text.strip()
    if text == "all":
        return tuple(range(1, N + 1))
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                a, b = part.split("-", 1)
                out.update(range(int(a), int(b) + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise UsageError(f"bad power specification {part!r}") from None
    if not out:
        raise UsageError("no powers given")
    bad = sorted(k for k in out if not 1 <= k <= N)
    if bad:
        raise UsageError(f"powers {bad} are outside 1..{N}")
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Formatting exact values


def radical_form(x: TowerElement) -> str:
    """Canonical string, or sign·sqrt(x**2) when the square lives lower in the tower."""
    x = x.minimal()
    if x.spec.depth > 1:
        sq = (x * x).minimal()
        if sq.spec.depth < x.spec.depth:
            body = f"sqrt({sq.canonical(paren=False)})"
            return ("-" if x.sign() < 0 else "") + body
    return x.canonical(paren=False)


def exact_string(z) -> str:
    if isinstance(z, TowerElement):
        return radical_form(z)
    re, im = z.re.minimal(), z.im.minimal()
    if im.is_zero():
        return radical_form(re)
    ims = radical_form(im)
    if ims.startswith("-"):
        imag = "-i·" + ims[1:]
    else:
        imag = "i·" + ims
    if re.is_zero():
        return imag
    sep = " - " if imag.startswith("-") else " + "
    return radical_form(re) + sep + imag.lstrip("-")


def _exp_string(a: RationalAngle) -> str:
    return "e^{" + a.pi_string().replace("π", "πi") + "}"


def root_of_unity_form(z: ComplexValue, N: int) -> str | None:
    """Express a non-real z as exp(i a) - exp(i b) with a, b multiples of 2 pi/N, if possible."""
    if z.im.is_zero() or N > 30:
        return None
    roots = [(RationalAngle(p, N), root_of_unity(RationalAngle(p, N))) for p in range(N)]
    best = None
    for a, ra in roots:
        for b, rb in roots:
            if a == b:
                continue
            if ra - rb == z:
                key = (abs(a.fraction()) + abs(b.fraction()), a.fraction(), b.fraction())
                if best is None or key < best[0]:
                    best = (key, a, b)
    if best is None:
        return None
    return f"{_exp_string(best[1])} - {_exp_string(best[2])}"


def value_json(z) -> dict:
    if isinstance(z, TowerElement):
        return {"exact": radical_form(z), "decimal": z.decimal(DIGITS)}
    return {"exact": exact_string(z), "decimal": z.decimal(DIGITS)}


def angle_json(a: RationalAngle) -> dict:
    f = a.fraction()
    return {"fraction_of_2pi": f"{f.numerator}/{f.denominator}", "radians": a.pi_string()}


# ---------------------------------------------------------------------------
# Running a case


def build_case(cfg: RunConfig) -> CaseStudy:
    if cfg.case == "decagon":
        return decagon_case()
    return davis_case(cfg.cache_path)


def verify_case(case: CaseStudy, level: str) -> dict:
    P = case.polytope
    eta = eta2 if case.n == 2 else eta4
    lifts_ok = all(eta(l) == s.pairing for l, s in zip(case.lifts.lifts, P.sides))
    gens = P.pairings() if level == "full" else None
    rep = verify_presentation(gens, case.presentation.relators, case.lifts.lifts)
    perm, signs = normalizer_check(case.f, case.f_hat, P, case.lifts.lifts)
    out = {
        "level": level,
        "generators": case.presentation.generator_count,
        "relators": rep["relators"],
        "spin_pass": rep["spin_pass"],
        "lifts_match_pairings": lifts_ok,
        "normalizer_signs_positive": all(v == 1 for v in signs.values()),
    }
    ok = lifts_ok and rep["spin_pass"] == rep["relators"] and out["normalizer_signs_positive"]
    if level == "full":
        out["lorentz_pass"] = rep["lorentz_pass"]
        ok = ok and rep["lorentz_pass"] == rep["relators"]
        breaks = sign_flip_breaks(case.presentation, rep["signs"])
        out["uniqueness"] = all(len(v) > 0 for v in breaks.values())
        out["min_relators_broken_by_flip"] = min(len(v) for v in breaks.values())
        # direct check: negate the first lift and evaluate again
        flipped = (-case.lifts.lifts[0],) + tuple(case.lifts.lifts[1:])
        opp1 = P.opp(1)
        flipped = tuple(-l if i + 1 == opp1 else l for i, l in enumerate(flipped))
        frep = verify_presentation(None, case.presentation.relators, flipped)
        out["flip_first_lift_spin_pass"] = frep["spin_pass"]
        ok = ok and out["uniqueness"] and frep["spin_pass"] < frep["relators"]
    out["ok"] = ok
    return out


def _record_json(r) -> dict:
    return {
        "label": r.label,
        "cell_dimension": r.dim,
        "point": [x.canonical(paren=False) for x in r.point.coords],
        "angles": [angle_json(a) for a in r.angles],
        "trace": value_json(r.trace),
        "nu": value_json(r.nu),
        "epsilon": epsilon(r.trace, r.angles),
        "word_length": len(r.gamma_word),
    }


def _power(case: CaseStudy, k: int, labels: dict):
    if k % case.order == 0:
        return k, [], spin_index(case, k)
    recs = fixed_points(case.f, case.f_hat, k, case.polytope, case.lifts.lifts, case.order, labels)
    return k, recs, spin_index(case, k, recs)


def run(cfg: RunConfig) -> tuple[dict, dict, int]:
    """Returns (canonical report, timing, exit code)."""
    timing = {}
    t0 = time.perf_counter()
    report: dict = {"case": {"name": cfg.case, "order": cfg.order}}
    try:
        case = build_case(cfg)
    except ConstructionError as exc:
        report["error"] = {"stage": "construction", "message": str(exc)}
        return report, timing, EXIT_CONSTRUCTION
    timing["construction_s"] = round(time.perf_counter() - t0, 3)
    P = case.polytope
    report["case"].update({
        "dimension": P.n,
        "sides": len(P.sides),
        "cells": {str(d): len(P.cells[d]) for d in sorted(P.cells)},
        "cycles": {str(d): len(P.cycles[d]) for d in sorted(P.cycles)},
        "lift_of_f_trace": value_json(complex_trace_real(case.f_hat)),
    })
    t1 = time.perf_counter()
    try:
        ver = verify_case(case, cfg.verify_level)
    except ConstructionError as exc:
        report["error"] = {"stage": "verification", "message": str(exc)}
        return report, timing, EXIT_VERIFY
    report["verification"] = ver
    timing["verification_s"] = round(time.perf_counter() - t1, 3)
    if not ver["ok"]:
        return report, timing, EXIT_VERIFY
    t2 = time.perf_counter()
    labels = default_labels(case)
    try:
        if cfg.threads != 1 and len(cfg.powers) > 1:
            workers = cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda k: _power(case, k, labels), cfg.powers))
        else:
            results = [_power(case, k, labels) for k in cfg.powers]
        powers = {}
        values = {}
        for k, recs, value in sorted(results, key=lambda t: t[0]):
            values[k] = value
            total = None
            for r in recs:
                total = r.nu if total is None else total + r.nu
            if recs and not total == value:
                raise IndexInconsistency(f"Spin value for k = {k} is not the sum of the local indices")
            entry = {
                "fixed_point_count": len(recs),
                "fixed_points": [_record_json(r) for r in recs],
                "spin": value_json(value),
            }
            ru = root_of_unity_form(value, case.order) if isinstance(value, ComplexValue) else None
            if ru:
                entry["spin"]["root_of_unity_form"] = ru
            powers[str(k)] = entry
        report["powers"] = powers
        N = case.order
        for k in values:
            if (N - k) in values and not values[N - k] == values[k].conj():
                raise IndexInconsistency(f"Spin values for k = {k} and {N - k} are not conjugate")
        if set(range(1, N + 1)) <= set(values):
            p = character_poly(values, N)
            report["character_polynomial"] = {
                "modulus": N,
                "coefficients": list(p.coefficients),
                "polynomial": str(p),
                "value_at_one": p.value_at_one(),
            }
            report["dim_bounds"] = dim_lower_bound(p)
            if p.value_at_one() != 0:
                raise IndexInconsistency("the character polynomial does not vanish at 1")
    except (IndexInconsistency, NonIntegralCoefficient, NotUnitSign, NonRealTrace, AngleOutOfRange,
            NonIsolatedFixedPoint, NonTermination, NotElliptic, NotFiniteOrder, AngleMatchFailure) as exc:
        report["error"] = {"stage": "index", "message": f"{type(exc).__name__}: {exc}"}
        return report, timing, EXIT_INDEX
    timing["index_s"] = round(time.perf_counter() - t2, 3)
    timing["total_s"] = round(time.perf_counter() - t0, 3)
    return report, timing, EXIT_OK


def complex_trace_real(g) -> TowerElement:
    from .indexengine import local_trace
    return local_trace(g)


def canonical_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def render_text(report: dict, timing: dict) -> str:
    lines = []
    c = report["case"]
    lines.append(f"case {c['name']}  (order {c['order']}, dimension {c.get('dimension', '?')})")
    if "cells" in c:
        lines.append("  cells    " + "  ".join(f"{d}:{n}" for d, n in c["cells"].items()))
        lines.append("  cycles   " + "  ".join(f"{d}:{n}" for d, n in c["cycles"].items()))
    v = report.get("verification")
    if v:
        lines.append(f"spin structure: {v['spin_pass']}/{v['relators']} relators lift to +1, "
                     f"lifts {'match' if v['lifts_match_pairings'] else 'DO NOT match'} the pairings, "
                     f"normalizer signs {'all +1' if v['normalizer_signs_positive'] else 'MIXED'}")
        if "uniqueness" in v:
            lines.append(f"  Lorentz relators {v['lorentz_pass']}/{v['relators']}; unique lift: "
                         f"{v['uniqueness']} (each flip breaks >= {v['min_relators_broken_by_flip']})")
    for k, e in report.get("powers", {}).items():
        s = e["spin"]
        extra = f"  = {s['root_of_unity_form']}" if "root_of_unity_form" in s else ""
        lines.append(f"k = {k:>2}: Spin = {s['exact']}{extra}   [{e['fixed_point_count']} fixed points]")
        groups: dict = {}
        for fp in e["fixed_points"]:
            key = (fp["label"], tuple(a["radians"] for a in fp["angles"]), fp["trace"]["exact"], fp["nu"]["exact"])
            groups[key] = groups.get(key, 0) + 1
        for (lab, ang, tr, nv), cnt in groups.items():
            mult = f" x{cnt}" if cnt > 1 else ""
            lines.append(f"    {lab or '?'}{mult}: angles {{{', '.join(ang)}}}  trace {tr}  nu {nv}")
        lines.append(f"    decimal {s['decimal']}")
    cp = report.get("character_polynomial")
    if cp:
        lines.append(f"character polynomial p(x) = {cp['polynomial']}   p(1) = {cp['value_at_one']}")
        b = report["dim_bounds"]
        lines.append(f"dim H+ = dim H- >= {b['per_chirality']},  dim H >= {b['total']}")
    if "error" in report:
        lines.append(f"ERROR [{report['error']['stage']}]: {report['error']['message']}")
    if timing:
        lines.append("timing " + ", ".join(f"{k} {v}" for k, v in sorted(timing.items())))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spinindex", description="Equivariant spin indices of hyperbolic case studies.")
    p.add_argument("--log-level", default=_env("LOG_LEVEL", "WARNING"))
    sub = p.add_subparsers(dest="command")
    r = sub.add_parser("run", help="build, verify and compute a case")
    r.add_argument("--case", choices=sorted(ORDERS), default=_env("CASE", "davis"))
    r.add_argument("--powers", default=_env("POWERS", "all"))
    r.add_argument("--output", choices=["text", "json"], default=_env("OUTPUT", "text"))
    r.add_argument("--cache", default=_env("CACHE", None))
    r.add_argument("--verify", choices=["fast", "full"], default=_env("VERIFY", "fast"))
    r.add_argument("--threads", type=int, default=int(_env("THREADS", "1")))
    r.add_argument("--no-timing", action="store_true",
                   default=_env("NO_TIMING", "") not in ("", "0"),
                   help="omit the timing field (json output is then fully canonical)")
    c = sub.add_parser("cache", help="manage the Davis symmetry-group cache")
    c.add_argument("action", choices=["build", "verify", "clear"])
    c.add_argument("--path", default=_env("CACHE", "spinindex-davis.cache"))
    return p


def cache_admin(path: str, action: str) -> tuple[str, int]:
    if action == "clear":
        return ("removed" if cache_mod.clear(path) else "nothing to remove"), EXIT_OK
    if action == "verify":
        try:
            info = cache_mod.verify(path)
        except FileNotFoundError:
            return f"no cache at {path}", EXIT_VERIFY
        except cache_mod.CorruptCache as exc:
            return f"CorruptCache: {exc}", EXIT_VERIFY
        return f"OK ({info['symmetry']} symmetries, {info['neighbors']} neighbor centers)", EXIT_OK
    from .casestudies import davis_sides
    P, sym, _ = davis_sides()
    digest = cache_mod.save(path, sym, [s.center for s in P.sides])
    return f"built {path} sha256 {digest}", EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in ("run", "cache", "-h", "--help") and not argv[0].startswith("--log"):
        argv = ["run"] + argv
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        args = parser.parse_args(["run"] + argv)
    if args.command == "cache":
        msg, code = cache_admin(args.path, args.action)
        print(msg)
        return code
    try:
        if args.case not in ORDERS:
            raise UsageError(f"unknown case {args.case!r}")
        if args.output not in ("text", "json") or args.verify not in ("fast", "full"):
            raise UsageError("bad output or verify level")
        cfg = RunConfig(args.case, parse_powers(str(args.powers), ORDERS[args.case]), args.output,
                        args.cache or None, args.verify, args.threads)
    except UsageError as exc:
        print(f"spinindex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report, timing, code = run(cfg)
    if cfg.output == "json":
        doc = dict(report)
        if not args.no_timing:
            doc["timing"] = timing
        print(canonical_json(doc))
    else:
        print(render_text(report, {} if args.no_timing else timing))
    return code


if __name__ == "__main__":
    sys.exit(main())
