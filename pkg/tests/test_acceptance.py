"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line; the lines are
repeated in the terminal summary. Run directly with ``python3 tests/test_acceptance.py``."""

import random
import time
from fractions import Fraction

import pytest

from oracle import naive_ideal, naive_nullspace, naive_rank
from orbitclosure.cli import run
from orbitclosure.exactla import PrimeField, random_prime
from orbitclosure.generic import (
    check_forward_invariance,
    exceptional_generators,
    generic_matrix,
    generic_rank,
    is_exceptional,
)
from orbitclosure.invariants import density_evidence, poly_invariants, verify_rational_invariant
from orbitclosure.parser import parse_poly, parse_system
from orbitclosure.selftest import FIXTURES, load_fixture
from orbitclosure.separator import Outcome, check_phi_invariance, fiber_check, phi_proxy, separate
from orbitclosure.vanish import span_ideal, stabilized_ideal, truncated_ideal

RESULTS = []
MAX_LEN = 4


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def quiet_cli(*argv):
    import io
    buf = io.StringIO()
    return run(list(argv), out=buf), buf.getvalue()


def invariants_oracle(spec, d, rng, npts=40):
    """Nullspace of rows M(g(p)) - M(p) over random points p, by naive elimination."""
    from oracle import naive_monomials

    monos = naive_monomials(spec.nvars, d)
    rows = []
    while len(rows) < npts:
        p = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(spec.nvars))
        for g in spec.generators:
            try:
                q = g(p)
            except ZeroDivisionError:
                continue
            rows.append([_mono(q, e) - _mono(p, e) for e in monos])
    return monos, naive_nullspace(rows, len(monos))


def _mono(p, e):
    v = Fraction(1)
    for x, k in zip(p, e):
        v *= Fraction(x) ** k
    return v


def test_criterion_1_additive():
    t0 = time.perf_counter()
    sysf = load_fixture("additive.toy")
    sp, xy = sysf.spec(), sysf.vars
    checks = []
    for max_len in (2, 3, 4):
        for mode in ("exact", "specialized"):
            c = generic_rank(sp, 1, max_len, mode, random.Random(max_len))
            checks.append((c.r, c.hd) == (2, 1))
    cert = generic_rank(sp, 1, MAX_LEN, "exact")
    # oracle: naive rank of the generic rows at a random point
    gm = generic_matrix(sp, 1, MAX_LEN)
    pt = (Fraction(17, 5), Fraction(-3, 7))
    checks.append(naive_rank([[e.eval(pt) for e in row] for row in gm.entries], 3) == 2)
    gens = exceptional_generators(sp, 1, MAX_LEN, cert)
    x = parse_poly("x", xy)
    checks.append(any(_divisible(g, x) for g in gens.gens))
    grid = [(a, b) for a in range(-4, 6) for b in range(-4, 6)]
    verdicts = [is_exceptional(sp, p, 1, MAX_LEN, cert).exceptional for p in grid]
    checks.append(verdicts == [p[0] == 0 for p in grid])
    eq = separate(sp, (2, 0), (2, 7), 1)
    ds = separate(sp, (2, 0), (3, 0), 1)
    checks.append(eq.outcome is Outcome.EQUAL)
    checks.append(ds.outcome is Outcome.DISTINCT and ds.witness == parse_poly("x - 2", xy))
    # oracle: the orbit ideal equals the naive nullspace on the same sample
    st = phi_proxy(sp, (2, 0), 1)
    monos, vecs = naive_ideal(st.sample.points, 2, 1)
    checks.append([[f.coeff(m) for m in monos] for f in st.ideal.basis] == vecs)
    inv = poly_invariants(sp, 3)
    want = [parse_poly(t, xy) for t in ("1", "x", "x^2", "x^3")]
    checks.append(list(inv.basis) == want and inv.dim == 4)
    monos, ns = invariants_oracle(sp, 3, random.Random(1))
    checks.append(span_ideal(inv.basis, 2, 3).basis == span_ideal(
        [parse_poly("+".join(f"({c})*{_mstr(m, xy)}" for c, m in zip(v, monos)), xy) for v in ns], 2, 3).basis)
    code, _ = quiet_cli("invariants", "additive.toy", "--degree", "3")
    checks.append(code == 0)
    elapsed = time.perf_counter() - t0
    report(1, all(checks) and elapsed < 5, f"additive analogue: {sum(checks)}/{len(checks)} checks, {elapsed:.2f}s < 5s")


def _divisible(g, x):
    try:
        g.divexact(x)
        return True
    except ArithmeticError:
        return False


def _mstr(m, names):
    parts = [f"{n}^{k}" for n, k in zip(names, m) if k]
    return "*".join(parts) or "1"


def test_criterion_2_squaring():
    t0 = time.perf_counter()
    sysf = load_fixture("squaring.toy")
    sp = sysf.spec()
    checks = []
    cert = generic_rank(sp, 2, MAX_LEN, "exact")
    checks.append(cert.r == 3)
    for v in (0, 1, -1):
        checks.append(is_exceptional(sp, (v,), 2, MAX_LEN, cert).exceptional is True)
    checks.append(is_exceptional(sp, (3,), 2, MAX_LEN, cert).exceptional is False)
    for d in range(6):
        pts = [(3 ** (2 ** k),) for k in range(d + 1)]
        checks.append(truncated_ideal(pts, 1, d).is_zero)
        st = stabilized_ideal(sp, (3,), d)
        checks.append(st.stabilized and st.ideal.is_zero and len(st.sample.points) >= d + 1)
    inv = poly_invariants(sp, 8)
    checks.append(inv.dim == 1 and inv.basis[0].is_constant())
    code, out = quiet_cli("density", "squaring.toy", "--point", "3")
    checks.append(code == 0 and "evidence-for-dense" in out)
    checks.append(density_evidence(sp, (3,), 3, 6).verdict == "evidence-for-dense")
    elapsed = time.perf_counter() - t0
    report(2, all(checks) and elapsed < 5, f"squaring: {sum(checks)}/{len(checks)} checks, {elapsed:.2f}s < 5s")


def test_criterion_3_scaling():
    t0 = time.perf_counter()
    sysf = load_fixture("scaling.toy")
    sp, xy = sysf.spec(), sysf.vars
    checks = []
    ok, _ = verify_rational_invariant(sp, parse_poly("x", xy), parse_poly("y", xy))
    checks.append(ok)
    want = span_ideal([parse_poly("x - y", xy)], 2, 1)
    checks.append(phi_proxy(sp, (1, 1), 1).ideal == want)
    checks.append(phi_proxy(sp, (2, 2), 1).ideal == want)
    v = separate(sp, (1, 1), (1, 2), 1)
    checks.append(v.outcome is Outcome.DISTINCT)
    elapsed = time.perf_counter() - t0
    report(3, all(checks) and elapsed < 2, f"scaling: {sum(checks)}/{len(checks)} checks, {elapsed:.2f}s < 2s")


def _random_general_point(sp, gens_by_d, rng):
    while True:
        p = tuple(Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(sp.nvars))
        try:
            for g in sp.generators:
                g(p)
        except ZeroDivisionError:
            continue
        if any(not g.eval(p) for gens in gens_by_d.values() for g in gens.gens):
            continue
        return p


def test_criterion_4_generic_hd_matches_orbit_hd():
    rng = random.Random(2024)
    bad = []
    total = 0
    for name in FIXTURES:
        sp = load_fixture(name).spec()
        certs = {d: generic_rank(sp, d, MAX_LEN, "exact") for d in (1, 2)}
        gens = {d: exceptional_generators(sp, d, MAX_LEN, certs[d]) for d in (1, 2)}
        for _ in range(50):
            p = _random_general_point(sp, gens, rng)
            for d in (1, 2):
                total += 1
                st = stabilized_ideal(sp, p, d)
                if not st.stabilized or st.outside_domain or st.ideal.hd != certs[d].hd:
                    bad.append((name, p, d, st.ideal.hd, certs[d].hd))
    report(4, not bad, f"generic h(d) = orbit h(d) on {total - len(bad)}/{total} (fixture, point, d) cases")


def _exceptional_sample(sp, d, cert):
    grid = [Fraction(a, b) for a in range(-3, 4) for b in (1, 2)]
    pts = set()
    if sp.nvars == 1:
        cand = [(a,) for a in grid]
    else:
        cand = [(a, b) for a in grid for b in grid]
    for p in cand:
        if is_exceptional(sp, p, d, MAX_LEN, cert).exceptional:
            pts.add(p)
    return sorted(pts)


def test_criterion_5_exceptional_locus_forward_invariant():
    violations, checked, per = 0, 0, []
    for name in FIXTURES:
        sp = load_fixture(name).spec()
        for d in (1, 2):
            cert = generic_rank(sp, d, MAX_LEN, "exact")
            gens = exceptional_generators(sp, d, MAX_LEN, cert)
            sample = _exceptional_sample(sp, d, cert)
            rep = check_forward_invariance(sp, gens, sample, MAX_LEN, cert)
            violations += len(rep.violations)
            checked += rep.checked
            per.append(len(sample) > 0)
    ok = violations == 0 and all(per) and checked > 0
    report(5, ok, f"{checked} generator images of exceptional points checked, {violations} violations")


def test_criterion_6_phi_check():
    violations, codes, bases = 0, [], 0
    for name in FIXTURES:
        sysf = load_fixture(name)
        sp = sysf.spec()
        pts = list(sysf.named_points.values())
        for d in (1, 2):
            for p in pts:
                bases += 1
                inv = check_phi_invariance(sp, p, d)
                violations += len(inv.violations)
                violations += not inv.proxy.stabilized
                # sampled orbit points as probes: proxy constant along the orbit
                probes = pts + inv.proxy.sample.points[:4]
                violations += len(fiber_check(sp, p, probes, d).violations)
                for q in inv.proxy.sample.points[:4]:
                    violations += separate(sp, p, q, d).outcome is not Outcome.EQUAL
        codes.append(quiet_cli("phi-check", name)[0])
    ok = violations == 0 and all(c == 0 for c in codes)
    report(6, ok, f"{bases} (fixture, base, d) cases, {violations} violations, cli exit codes {codes}")


def test_criterion_7_oracle_equivalence():
    rng = random.Random(7)
    mism = 0
    for _ in range(100):
        n, d = rng.randint(1, 3), rng.randint(0, 3)
        pts = [tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n))
               for _ in range(rng.randint(0, 20))]
        monos, vecs = naive_ideal(pts, n, d)
        got = truncated_ideal(pts, n, d)
        mism += [[f.coeff(m) for m in monos] for f in got.basis] != vecs
    report(7, mism == 0, f"truncated ideal vs naive oracle: {100 - mism}/100 identical")


def _hd_over(text, field, d):
    sysf = parse_system(text, field)
    sp = sysf.spec()
    c = generic_rank(sp, d, MAX_LEN, "specialized", random.Random(5))
    orbit = [stabilized_ideal(sp, p, d).ideal.hd for p in sysf.named_points.values()]
    return c.hd, orbit


def test_criterion_8_mode_and_field_consistency():
    from importlib import resources

    rank_bad, field_bad, retries = [], [], 0
    rng = random.Random(8)
    for name in FIXTURES:
        sp = load_fixture(name).spec()
        text = (resources.files("orbitclosure") / "fixtures" / name).read_text()
        for d in (0, 1, 2):
            re_ = generic_rank(sp, d, MAX_LEN, "exact").r
            rs = generic_rank(sp, d, MAX_LEN, "specialized", random.Random(d)).r
            if re_ != rs:
                rank_bad.append((name, d))
            q = _hd_over(text, None, d)
            p = 1000003
            for attempt in range(4):
                fp = _hd_over(text, PrimeField(p), d)
                if fp == q:
                    break
                retries += 1
                p = random_prime(rng)
            else:
                field_bad.append((name, d, q, fp))
    ok = not rank_bad and not field_bad
    report(8, ok, f"exact/specialized rank mismatches {rank_bad}, Q/Fp h(d) mismatches {field_bad}, "
                  f"bad-prime retries {retries}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
