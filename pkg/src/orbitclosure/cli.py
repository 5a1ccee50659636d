"""
Command-line front end.

    orbitclosure <command> SYSTEM [options]

Exit status: 0 success, 1 a mathematical flag was raised (unstable sample,
point outside the domain, failed check), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from importlib import resources
from pathlib import Path

from .dynsys import orbit_sample
from .generic import SpecializationError, exceptional_generators, generic_rank, is_exceptional
from .invariants import density_evidence, poly_invariants, verify_rational_invariant
from .parser import ParseError, parse_field, parse_point, parse_poly, parse_system
from .separator import Outcome, check_phi_invariance, fiber_check, separate
from .vanish import hilbert_profile, stabilized_ideal

DEFAULT_DEGREE = {
    "orbit": 1, "ideal": 1, "hilbert": 2, "generic-rank": 1, "exceptional": 1,
    "separate": 1, "phi-check": 1, "invariants": 2, "density": 3,
}


class UsageError(Exception):
    pass


def _s(v) -> str:
    return str(v)


def _pt(p) -> list:
    return [_s(v) for v in p]


def _word(w) -> list:
    return list(w)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("orbitclosure") / "fixtures" / name))


def load_system(path: str, field_text: str | None = None):
    p = Path(path)
    if not p.exists() and fixture_path(path).exists():
        p = fixture_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    override = parse_field(field_text) if field_text else None
    return parse_system(text, override)


def _points(system, specs, default_all=True):
    out = []
    for s in specs or []:
        if s in system.named_points:
            out.append((s, system.named_points[s]))
        else:
            try:
                pt = parse_point(s, system.field)
            except ParseError as e:
                raise UsageError(f"--point {s!r}: {e}") from None
            if len(pt) != len(system.vars):
                raise UsageError(f"--point {s!r} needs {len(system.vars)} coordinates")
            out.append((s, pt))
    if not out and default_all:
        out = list(system.named_points.items())
    if not out:
        raise UsageError("no points given (use --point or add 'point' lines)")
    return out


# --- commands -------------------------------------------------------------------
# each returns (result, flags, text lines)


def cmd_orbit(args, system, spec, rng):
    res, skipped, lines = [], [], []
    for name, pt in _points(system, args.point):
        s = orbit_sample(spec, pt, args.max_len, args.cap)
        res.append({
            "point": name,
            "entries": [{"word": _word(w), "image": _pt(p)} for w, p in s.entries],
            "skipped": [_word(w) for w in s.skipped],
            "capped": s.capped,
        })
        skipped.extend(_word(w) for w in s.skipped)
        lines.append(f"orbit of {name} (words of length <= {args.max_len}): {len(s.entries)} points")
        for w, p in s.entries:
            lines.append(f"  {_word(w)!s:<20} ({', '.join(_pt(p))})")
        if s.skipped:
            lines.append(f"  undefined words: {[_word(w) for w in s.skipped]}")
    return res, {"skipped_words": skipped, "outside_domain": bool(skipped)}, lines


def cmd_ideal(args, system, spec, rng):
    res, lines, flags = [], [], {"skipped_words": [], "unstable": False, "outside_domain": False}
    for name, pt in _points(system, args.point):
        st = stabilized_ideal(spec, pt, args.degree, args.window, args.len_limit, args.cap)
        basis = st.ideal.to_strs(system.vars)
        res.append({"point": name, "degree": args.degree, "hd": st.ideal.hd, "basis": basis,
                    "stabilized": st.stabilized, "used_len": st.used_len,
                    "sample_size": len(st.sample.entries)})
        flags["unstable"] |= not st.stabilized
        flags["outside_domain"] |= st.outside_domain
        flags["skipped_words"].extend(_word(w) for w in st.skipped)
        lines.append(f"I({name})[{args.degree}]: h = {st.ideal.hd}, stabilized = {st.stabilized} "
                     f"(length {st.used_len})")
        lines.extend(f"  {b}" for b in basis)
    return res, flags, lines


def cmd_hilbert(args, system, spec, rng):
    res, lines, flags = [], [], {"skipped_words": [], "unstable": False, "outside_domain": False}
    for name, pt in _points(system, args.point):
        st = stabilized_ideal(spec, pt, args.degree, args.window, args.len_limit, args.cap)
        prof = hilbert_profile(st.sample.points, spec.nvars, args.degree, spec.field)
        res.append({"point": name, "profile": {str(k): v for k, v in prof.items()},
                    "stabilized": st.stabilized})
        flags["unstable"] |= not st.stabilized
        flags["outside_domain"] |= st.outside_domain
        flags["skipped_words"].extend(_word(w) for w in st.skipped)
        lines.append(f"{name}: " + ", ".join(f"h({k})={v}" for k, v in prof.items()))
    return res, flags, lines


def _cert_json(c):
    return {"degree": c.d, "max_len": c.max_len, "r": c.r, "hd": c.hd,
            "pivot_words": [_word(w) for w in c.pivot_words], "pivot_cols": c.pivot_cols,
            "method": c.method, "stable": c.stable, "nrows": c.nrows, "escalated": c.escalated}


def cmd_generic_rank(args, system, spec, rng):
    c = generic_rank(spec, args.degree, args.max_len, args.mode, rng)
    lines = [f"generic rank r = {c.r}, h({c.d}) = {c.hd}  [{c.method}, {c.nrows} rows, "
             f"{'stable' if c.stable else 'NOT stable'} at max_len + 1]"]
    return _cert_json(c), {"unstable": False}, lines


def cmd_exceptional(args, system, spec, rng):
    c = generic_rank(spec, args.degree, args.max_len, args.mode, rng)
    g = exceptional_generators(spec, args.degree, args.max_len, c, args.budget)
    pts = _points(system, args.point, default_all=True) if (args.point or system.named_points) else []
    verdicts = []
    lines = [f"r = {c.r}; {len(g.gens)} minor generators ({g.minors_examined}/{g.minors_total} minors)"]
    lines.extend(f"  {p.to_str(system.vars)}" for p in g.gens)
    outside = False
    for name, pt in pts:
        v = is_exceptional(spec, pt, args.degree, args.max_len, c)
        outside |= v.outside_domain
        verdicts.append({"point": name, "exceptional": v.exceptional, "rank_at_point": v.rank_at_point,
                         "outside_domain": v.outside_domain})
        label = "outside domain" if v.outside_domain else ("exceptional" if v.exceptional else "general")
        lines.append(f"{name}: {label} (rank {v.rank_at_point} vs r = {c.r})")
    result = {"cert": _cert_json(c), "generators": [p.to_str(system.vars) for p in g.gens],
              "minors_examined": g.minors_examined, "minors_total": g.minors_total,
              "complete": g.complete, "points": verdicts}
    return result, {"outside_domain": outside}, lines


def cmd_separate(args, system, spec, rng):
    pts = _points(system, args.point, default_all=False)
    if len(pts) != 2:
        raise UsageError("separate needs exactly two --point options")
    (nx, x), (ny, y) = pts
    v = separate(spec, x, y, args.degree, args.window, args.len_limit, args.cap)
    result = {"outcome": v.outcome.value, "degree": v.d,
              "witness": v.witness.to_str(system.vars) if v.witness is not None else None,
              "witness_side": v.witness_side,
              "witness_point": _pt(v.witness_point) if v.witness_point is not None else None,
              "detail": v.detail}
    line = f"{nx} vs {ny} at degree {v.d}: {v.outcome.value}"
    if v.witness is not None:
        line += f", witness {v.witness.to_str(system.vars)}"
    flags = {"unstable": v.outcome is Outcome.UNSTABLE,
             "outside_domain": v.outcome is Outcome.OUTSIDE_DOMAIN,
             "skipped_words": [w for side in v.detail["skipped_words"] for w in side]}
    return result, flags, [line]


def cmd_phi_check(args, system, spec, rng):
    res, lines = [], []
    flags = {"unstable": False, "outside_domain": False, "violations": 0}
    probes = [p for _, p in _points(system, args.probe, default_all=True)] if (args.probe or system.named_points) else []
    for name, pt in _points(system, args.point):
        inv = check_phi_invariance(spec, pt, args.degree, args.window, args.len_limit, args.cap)
        entry = {"point": name, "proxy": inv.proxy.ideal.to_strs(system.vars),
                 "images": [{"generator": i, "image": _pt(img), "outcome": o.value} for i, img, o in inv.images],
                 "invariance_violations": len(inv.violations)}
        flags["unstable"] |= not inv.proxy.stabilized
        flags["outside_domain"] |= inv.proxy.outside_domain
        flags["violations"] += len(inv.violations)
        lines.append(f"{name}: proxy {entry['proxy']}; images "
                     + ", ".join(f"g{i}->{o.value}" for i, _, o in inv.images))
        if spec.monoid:
            fb = fiber_check(spec, pt, probes, args.degree, args.window, args.len_limit, args.cap)
            entry["fiber"] = [{"probe": _pt(p.probe), "equal": p.equal, "member": p.member} for p in fb.probes]
            entry["fiber_violations"] = len(fb.violations)
            flags["violations"] += len(fb.violations)
            lines.append(f"  fiber: {sum(p.equal for p in fb.probes)} equal, "
                         f"{sum(p.member for p in fb.probes)} members, {len(fb.violations)} violations")
        else:
            entry["fiber"] = None
            lines.append("  fiber check skipped: not a monoid")
        res.append(entry)
    return res, flags, lines


def cmd_invariants(args, system, spec, rng):
    inv = poly_invariants(spec, args.degree)
    basis = [p.to_str(system.vars) for p in inv.basis]
    result = {"degree": inv.d, "dim": inv.dim, "basis": basis}
    lines = [f"polynomial invariants of degree <= {inv.d}: dim {inv.dim}"] + [f"  {b}" for b in basis]
    flags = {}
    if args.verify:
        try:
            p = parse_poly(args.verify[0], system.vars, system.field)
            q = parse_poly(args.verify[1], system.vars, system.field)
        except ParseError as e:
            raise UsageError(f"--verify: {e}") from None
        if q.is_zero():
            raise UsageError("--verify: denominator must be nonzero")
        ok, residues = verify_rational_invariant(spec, p, q)
        result["verify"] = {"p": args.verify[0], "q": args.verify[1], "invariant": ok,
                            "residues": [{"generator": i, "residue": r.to_str(system.vars)} for i, r in residues]}
        lines.append(f"({args.verify[0]})/({args.verify[1]}) invariant: {ok}")
        lines.extend(f"  g{i}: residue {r.to_str(system.vars)}" for i, r in residues)
        flags["violations"] = len(residues)
    return result, flags, lines


def cmd_density(args, system, spec, rng):
    res, lines = [], []
    flags = {"unstable": False, "outside_domain": False, "skipped_words": []}
    for name, pt in _points(system, args.point):
        rep = density_evidence(spec, pt, args.degree, args.inv_degree, args.window, args.len_limit,
                               args.max_len, args.mode, rng)
        res.append({"point": name, "d_orbit": rep.d_orbit, "d_inv": rep.d_inv,
                    "orbit_ideal_zero": rep.orbit_ideal_zero, "invariants_trivial": rep.invariants_trivial,
                    "exceptional_flag": rep.exceptional_flag, "verdict": rep.verdict, "detail": rep.detail})
        flags["unstable"] |= not rep.detail["stabilized"]
        flags["outside_domain"] |= rep.detail["outside_domain"] or bool(rep.detail["skipped_words"])
        flags["skipped_words"].extend(rep.detail["skipped_words"])
        lines.append(f"{name}: {rep.verdict} (orbit ideal zero: {rep.orbit_ideal_zero}, "
                     f"invariants trivial: {rep.invariants_trivial}, exceptional: {rep.exceptional_flag})")
    return res, flags, lines


def cmd_selftest(args, system, spec, rng):
    from .selftest import run_selftest

    checks = run_selftest(seed=args.seed or 0)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in checks]
    failed = sum(not ok for _, ok, _ in checks)
    return ([{"check": n, "passed": ok, "detail": d} for n, ok, d in checks],
            {"violations": failed}, lines)


COMMANDS = {
    "orbit": cmd_orbit, "ideal": cmd_ideal, "hilbert": cmd_hilbert, "generic-rank": cmd_generic_rank,
    "exceptional": cmd_exceptional, "separate": cmd_separate, "phi-check": cmd_phi_check,
    "invariants": cmd_invariants, "density": cmd_density, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--degree", "-d", type=int, default=None, help="degree bound d")
    common.add_argument("--max-len", type=int, default=4, help="word-length bound for symbolic rows / orbits")
    common.add_argument("--window", type=int, default=3, help="stabilization window")
    common.add_argument("--len-limit", type=int, default=10, help="longest word length tried when stabilizing")
    common.add_argument("--cap", type=int, default=10_000, help="maximum orbit sample size")
    common.add_argument("--seed", type=int, default=None, help="seed for random specialization")
    common.add_argument("--mode", choices=("exact", "specialized"), default="specialized")
    common.add_argument("--field", default=None, help="override the system's field, e.g. 'Fp 1000003'")

    ap = argparse.ArgumentParser(prog="orbitclosure", description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name != "selftest":
            sp.add_argument("system", help="system definition file (or a bundled fixture name)")
            sp.add_argument("--point", "-p", action="append", help="point name or coordinates like 2,1/3")
        if name == "phi-check":
            sp.add_argument("--probe", action="append", help="fiber probe (name or coordinates)")
        if name == "exceptional":
            sp.add_argument("--budget", type=int, default=200, help="number of minors to expand")
        if name == "invariants":
            sp.add_argument("--verify", nargs=2, metavar=("P", "Q"), help="check P/Q is a rational invariant")
        if name == "density":
            sp.add_argument("--inv-degree", type=int, default=6, help="degree bound for the invariant search")
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.degree is None:
        args.degree = DEFAULT_DEGREE.get(args.command, 1)
    rng = random.Random(args.seed if args.seed is not None else 0)
    t0 = time.perf_counter()
    try:
        if args.degree < 0 or args.max_len < 1 or args.window < 1 or args.len_limit < 1:
            raise UsageError("degree must be >= 0; max-len, window and len-limit >= 1")
        if args.command == "selftest":
            system = spec = None
        else:
            system = load_system(args.system, args.field)
            spec = system.spec()
        result, flags, lines = COMMANDS[args.command](args, system, spec, rng)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SpecializationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    flags = {"skipped_words": flags.get("skipped_words", []), "unstable": bool(flags.get("unstable")),
             "outside_domain": bool(flags.get("outside_domain")), **{k: v for k, v in flags.items()
                                                                      if k not in ("skipped_words", "unstable", "outside_domain")}}
    if args.json:
        doc = {
            "command": args.command,
            "input": {"system": getattr(args, "system", None),
                      "points": getattr(args, "point", None) or []},
            "params": {"degree": args.degree, "max_len": args.max_len, "window": args.window,
                       "seed": args.seed, "mode": args.mode},
            "result": result,
            "flags": flags,
            # a fixed seed promises byte-identical output, so wall time is withheld
            "timing_ms": None if args.seed is not None else round((time.perf_counter() - t0) * 1000, 3),
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    failed = flags["unstable"] or flags["outside_domain"] or flags.get("violations", 0)
    return 1 if failed else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
