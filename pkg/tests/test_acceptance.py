"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
under "acceptance criteria".
"""

import json
import math
import time

import numpy as np
import pytest

import oracles
from conftest import SQRT2, random_disc, record_criterion
from hinfmatch import (
    LensParams,
    Matrix2,
    ProblemInstance,
    RealPolynomial,
    feasibility_threshold,
    lens_contains,
    lens_derivative_at_zero,
    lens_map,
    lens_map_inv,
    pick_feasible,
    pulled_back_derivative,
    reduce_instance,
    schwarz_derivative,
    sigma_max_2x2,
    solve_gamma,
)
from hinfmatch.approximation import gap_sequence, match_constraints, optimal_taylor_coeffs
from hinfmatch.cli import main
from hinfmatch.io import dump_instance


def cli_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out.strip().splitlines()[-1])


@pytest.fixture
def example_file(tmp_path, example):
    p = tmp_path / "example.json"
    dump_instance(example, p)
    return str(p)


def test_1_optimal_cost(capsys, example_file, tmp_path):
    t0 = time.perf_counter()
    out = tmp_path / "solve.json"
    code = main(["solve", example_file, "--out", str(out)])
    elapsed = time.perf_counter() - t0
    capsys.readouterr()
    res = json.loads(out.read_text())
    num, den = res["p"]["num"], res["p"]["den"]
    slope = num[1] / den[0]
    err = abs(res["gamma_star"] - SQRT2)
    ok = code == 0 and err < 1e-9 and abs(slope - 1) < 1e-9 and abs(num[0]) < 1e-9 and elapsed < 5
    record_criterion("1 optimal cost", ok,
                     f"gamma*={res['gamma_star']!r} |err|={err:.1e} p'={slope!r} {elapsed:.2f}s")
    assert ok


def test_2_optimal_controller_cost(capsys, example_file):
    t0 = time.perf_counter()
    code, res = cli_json(capsys, "verify", example_file, "--controller", "optimal")
    elapsed = time.perf_counter() - t0
    err = abs(res["norm"] - SQRT2)
    ok = code == 0 and res["converged"] and err < 1e-6 and elapsed < 10
    record_criterion("2 optimal controller cost", ok,
                     f"norm={res['norm']!r} |err|={err:.1e} grid={res['grid_size']} {elapsed:.2f}s")
    assert ok


def test_3_derivative_constant(lens_sqrt2):
    formula = lens_derivative_at_zero(lens_sqrt2)
    contour = schwarz_derivative(lambda w: lens_map(lens_sqrt2, w), 0.5, 4096)
    # float(sqrt 2) is not sqrt 2, so the formula is 0.5 to the last ulp only
    ok = abs(formula - 0.5) <= 1e-15 and abs(contour - formula) < 1e-8
    record_criterion("3 derivative constant", ok,
                     f"formula-0.5={formula - 0.5:.1e} |contour-formula|={abs(contour - formula):.1e}")
    assert ok


def test_4_conformal_invariants():
    rng = np.random.default_rng(4)
    worst = {"symmetry": 0.0, "roundtrip": 0.0, "boundary": 0.0}
    contained = True
    for g in (1.1, SQRT2, 2.0, 5.0):
        p = LensParams.from_gamma(g)
        w = random_disc(rng, 1000)
        s = lens_map(p, w)
        worst["symmetry"] = max(worst["symmetry"], np.max(np.abs(lens_map(p, np.conj(w)) - np.conj(s))))
        contained &= bool(np.all(lens_contains(p, s, 0.0)))
        worst["roundtrip"] = max(worst["roundtrip"], np.max(np.abs(lens_map_inv(p, s) - w)))
        t = rng.uniform(-np.pi, np.pi, 1000)
        sb = lens_map(p, np.exp(1j * t))
        worst["boundary"] = max(worst["boundary"],
                                np.max(np.abs(np.maximum(np.abs(1 - sb), np.abs(1 + sb)) - g)))
    ok = (worst["symmetry"] < 1e-12 and contained and worst["roundtrip"] < 1e-10
          and worst["boundary"] < 1e-10)
    record_criterion("4 conformal invariants", ok,
                     " ".join(f"{k}={v:.1e}" for k, v in worst.items()) + f" contained={contained}")
    assert ok


def test_5_sigma_and_parallelogram():
    rng = np.random.default_rng(5)
    g = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    one = np.ones_like(g)
    e1 = np.max(np.abs(sigma_max_2x2(Matrix2(one, g, g, one)) - np.maximum(np.abs(1 - g), np.abs(1 + g))))
    e2 = 0.0
    for _ in range(1000):
        m1 = Matrix2.from_array(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        m2 = Matrix2.from_array(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        ma, md = (m1 + m2) * 0.5, (m1 - m2) * 0.5
        lhs = ma.gram().as_array() + md.gram().as_array()
        rhs = 0.5 * (m1.gram().as_array() + m2.gram().as_array())
        e2 = max(e2, np.max(np.abs(lhs - rhs)))
    ok = e1 < 1e-12 and e2 < 1e-13
    record_criterion("5 symmetric sigma_max and parallelogram", ok, f"sigma err={e1:.1e} parallelogram err={e2:.1e}")
    assert ok


def _schwarz_candidates(example):
    res = solve_gamma(example)
    data = reduce_instance(example)
    orders = list(range(1, 38, 2))
    coeffs = optimal_taylor_coeffs(res.p, res.gamma_star, orders[-1])
    levels = {pt.order: pt.norm_value for pt in gap_sequence(example, res.gamma_star, orders, p=res.p)}
    cands = [("G*", res.s_star.matched, res.gamma_star)]
    for n in orders:
        g = match_constraints(RealPolynomial(coeffs[: n + 1]), data)
        cands.append((f"G_{n}", g, levels[n]))
    return cands


def test_6_schwarz_bound(example):
    # every candidate is pulled back at the level where it is feasible: its own cost
    cands = _schwarz_candidates(example)
    assert len(cands) == 20
    mags = {name: abs(pulled_back_derivative(g, level, 0.5, 4096)) for name, g, level in cands}
    bound_ok = all(m <= 1 + 1e-8 for m in mags.values())
    equality = [name for name, m in mags.items() if abs(m - 1) < 1e-6]
    ok = bound_ok and equality == ["G*"]
    gap = min(1 - m for name, m in mags.items() if name != "G*")
    record_criterion("6 Schwarz bound", ok,
                     f"|p'(0)| for G*={mags['G*']:.12f}, max over approximants=1-{gap:.2e}, equality only at {equality}")
    assert ok


@pytest.mark.xfail(strict=True, reason="every G in X pulls back through the sqrt(2) lens with p'(0) = 1")
def test_6_schwarz_bound_fixed_level(example):
    # literal reading: all candidates pulled back at sqrt(2); the chain rule
    # gives p'(0) = 0.5 / 0.5 = 1 for each, so equality cannot single out G*
    params = LensParams.from_gamma(SQRT2)
    mags = {}
    for name, g, _ in _schwarz_candidates(example):
        mags[name] = abs(schwarz_derivative(lambda w, g=g: lens_map_inv(params, g(w)), 0.5, 4096))
    equality = [name for name, m in mags.items() if abs(m - 1) < 1e-6]
    record_criterion("6 Schwarz bound, all pulled back at sqrt(2)", equality == ["G*"],
                     f"equality holds for {len(equality)} of 20 candidates (expected failure)")
    assert equality == ["G*"]


def test_7_gap_sequence(example):
    t0 = time.perf_counter()
    pts = gap_sequence(example, SQRT2, [1, 3, 5, 9, 15, 25])
    elapsed = time.perf_counter() - t0
    ex = [p.excess for p in pts]
    ok = (all(e > 1e-6 for e in ex) and all(b <= a for a, b in zip(ex, ex[1:]))
          and abs(pts[0].norm_value - 1.5) < 1e-9 and elapsed < 30)
    record_criterion("7 gap sequence", ok, "excess " + ", ".join(f"N={p.order}:{p.excess:.4g}" for p in pts)
                     + f" {elapsed:.2f}s")
    assert ok


def test_8_parametric_cross_check(capsys, tmp_path):
    errs = []
    for c in (0.1, 0.25, 0.4):
        f = tmp_path / f"c{c}.json"
        f.write_text(json.dumps({"a": {"num": [0, c]}, "b": {"num": [0, 0, 1]}}))
        code, res = cli_json(capsys, "solve", str(f))
        want = 1 / math.cos(oracles.alpha_for_slope(c))
        errs.append(abs(res["gamma_star"] - want) if code == 0 else math.inf)
    ok = max(errs) < 1e-8
    record_criterion("8 parametric family", ok, "errors " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok


def _random_instances(rng):
    singles, pairs = [], []
    while len(singles) < 10:
        z0 = rng.uniform(-0.9, 0.9)
        inst = ProblemInstance.from_coeffs(rng.uniform(-0.6, 0.6, 2), [-z0, 1.0])
        singles.append(inst)
    while len(pairs) < 10:
        z = rng.uniform(0.2, 0.85) * np.exp(1j * rng.uniform(0.2, np.pi - 0.2))
        a = rng.uniform(-0.5, 0.5, 3)
        if abs(np.polyval(a[::-1], z).imag) < 0.02:
            continue
        pairs.append(ProblemInstance.from_coeffs(a, [abs(z) ** 2, -2 * z.real, 1.0]))
    return singles, pairs


def test_9_pick_oracle():
    rng = np.random.default_rng(9)
    singles, pairs = _random_instances(rng)
    errs = []
    for inst in singles + pairs:
        d = reduce_instance(inst)
        thr = feasibility_threshold(d).upper
        # the bracket ends really are a pick_feasible switch
        assert pick_feasible(LensParams.from_gamma(thr + 1e-9), d)
        if d.size == 1:
            want = oracles.single_node_threshold(d.node_targets[0])
            assert want == pytest.approx(1 + abs(d.node_targets[0]), abs=1e-12)
        else:
            want = oracles.blaschke_threshold(d.node_points, d.node_targets, 4.0)
        errs.append(abs(thr - want))
    ok = max(errs) < 1e-4
    record_criterion("9 Pick threshold vs Blaschke sweep", ok,
                     f"20 instances, max |diff| single={max(errs[:10]):.1e} pair={max(errs[10:]):.1e}")
    assert ok
