"""Quick end-to-end checks over the bundled fixture systems."""

from __future__ import annotations

import random
from importlib import resources

from .generic import check_forward_invariance, exceptional_generators, generic_rank
from .invariants import density_evidence, poly_invariants, verify_rational_invariant
from .parser import parse_poly, parse_system
from .separator import Outcome, check_phi_invariance, fiber_check, separate
from .vanish import span_ideal, stabilized_ideal

FIXTURES = ("additive.toy", "squaring.toy", "scaling.toy", "rational.toy", "twogen.toy")


def load_fixture(name: str):
    text = (resources.files("orbitclosure") / "fixtures" / name).read_text(encoding="utf-8")
    return parse_system(text)


def run_selftest(seed: int = 0) -> list[tuple[str, bool, str]]:
    rng = random.Random(seed)
    out = []

    def check(name, ok, detail=""):
        out.append((name, bool(ok), detail))

    add = load_fixture("additive.toy")
    sp, pts = add.spec(), add.named_points
    cert = generic_rank(sp, 1, 4, "specialized", rng)
    check("additive generic rank", cert.r == 2 and cert.hd == 1, f"r={cert.r} h(1)={cert.hd}")
    g = exceptional_generators(sp, 1, 4, cert)
    x = parse_poly("x", add.vars)
    check("additive exceptional generator", any(not f.eval((0, 5)) and f.divexact(x) for f in g.gens),
          ", ".join(f.to_str(add.vars) for f in g.gens))
    v1 = separate(sp, pts["a"], pts["b"], 1)
    v2 = separate(sp, pts["a"], pts["c"], 1)
    check("additive separation", v1.outcome is Outcome.EQUAL and v2.outcome is Outcome.DISTINCT
          and v2.witness.to_str(add.vars) == "x - 2", f"{v1.outcome.value}, {v2.outcome.value}")
    inv = poly_invariants(sp, 3)
    check("additive invariants", inv.dim == 4, ", ".join(p.to_str(add.vars) for p in inv.basis))

    sq = load_fixture("squaring.toy")
    rep = density_evidence(sq.spec(), sq.named_points["three"], 3, 6, rng=rng)
    check("squaring density", rep.verdict == "evidence-for-dense", rep.verdict)

    sc = load_fixture("scaling.toy")
    ok, _ = verify_rational_invariant(sc.spec(), parse_poly("x", sc.vars), parse_poly("y", sc.vars))
    st = stabilized_ideal(sc.spec(), sc.named_points["a"], 1)
    want = span_ideal([parse_poly("x - y", sc.vars)], 2, 1)
    check("scaling invariant x/y", ok and st.ideal == want, str(st.ideal.to_strs(sc.vars)))

    for name in FIXTURES:
        sysf = load_fixture(name)
        spec = sysf.spec()
        bad = 0
        for p in sysf.named_points.values():
            bad += len(check_phi_invariance(spec, p, 1).violations)
            bad += len(fiber_check(spec, p, list(sysf.named_points.values()), 1).violations)
        c = generic_rank(spec, 1, 4, "specialized", rng)
        gens = exceptional_generators(spec, 1, 4, c)
        fw = check_forward_invariance(spec, gens, list(sysf.named_points.values()), 4, c)
        check(f"{name} proxy and locus checks", bad == 0 and fw.ok,
              f"{bad} proxy violations, {len(fw.violations)} locus violations")
    return out
