from fractions import Fraction

import numpy as np
import pytest

import oracles as O
from lovx import fracprog as fp, graphcat as gc
from lovx.setfn import SetFunction, decode, indicator


def bundled(name):
    return gc.bundled_graph(name)


def solve(inst, x0, prox=1.0, **kw):
    p = inst.ratio_problem(prox)
    return fp.ipsd_solve(p, np.asarray(x0, dtype=float), fp.SolveOptions(**kw))


# -- Dinkelbach


def test_dinkelbach_mincut_k3():
    inst = gc.mincut(bundled("k3"))
    tr = fp.dinkelbach_discrete(inst.f, inst.g, "min", inst.family)
    assert tr.value == 2
    assert len(tr.iterates) - 1 <= 3


def test_dinkelbach_constant_ratio():
    f = SetFunction(3, table=np.arange(8) + 1)
    tr = fp.dinkelbach_discrete(f, f)
    assert tr.value == 1 and len(tr.iterates) <= 2


def test_dinkelbach_independence_p3():
    inst = gc.independence_number(bundled("p3"))
    tr = fp.dinkelbach_discrete(inst.f, inst.g, "max")
    assert tr.value == 2
    assert tr.is_monotone(0)


def test_dinkelbach_continuous_wrapper():
    # F, G on indicators of a finite set: the generic driver with an exact inner step
    g = bundled("p4")
    inst = gc.cheeger_cut(g)
    idx = inst.feasible_indices()
    X = inst.indicator_matrix(idx)
    F = lambda x: float(inst.F(x))          # noqa: E731
    G = lambda x: float(inst.G(x))          # noqa: E731

    def inner(r):
        v = inst.F(X) - float(r) * inst.G(X)
        return X[int(np.argmin(v))]
    tr = fp.dinkelbach_solve(F, G, inner, X[-1])
    assert tr.is_monotone()
    assert tr.value == pytest.approx(float(O.cheeger(4, O.edges_of(g))))


@pytest.mark.parametrize("seed", range(6))
def test_dinkelbach_reaches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    g = gc.random_graph(n, 0.5, rng)
    for inst in (gc.mincut(g), gc.cheeger_cut(g), gc.maxcut(g), gc.independence_number(g),
                 gc.cheeger_variants(g, "normalized_cut")):
        tr = fp.dinkelbach_discrete(inst.f, inst.g, inst.sense, inst.family)
        assert inst.value(tr.value) == inst.discrete_optimum()[0]


# -- IP-SD


def test_ipsd_maxcut_k3():
    inst = gc.maxcut(bundled("k3"))
    tr = solve(inst, [1, -1, -1], prox=0.0, max_iter=100)
    assert tr.is_monotone()
    assert tr.extracted[1] == 2


def test_ipsd_cheeger_p3():
    g = bundled("p3")
    inst = gc.cheeger_cut(g)
    tr = solve(inst, [1, 0, 0], max_iter=100)
    assert tr.is_monotone()
    assert tr.extracted[1] == O.cheeger(3, O.edges_of(g))


def test_ipsd_from_optimum_is_constant():
    g = bundled("c5")
    inst = gc.mincut(g)
    opt, res = inst.discrete_optimum()
    a = res.witnesses[0]
    x0 = indicator(a, inst.f.n, inst.f.kind)
    tr = solve(inst, x0, max_iter=50)
    assert all(r == pytest.approx(float(opt)) for r in tr.ratios)


def test_ipsd_improves_on_start():
    rng = np.random.default_rng(3)
    for run in range(10):
        g = gc.random_graph(6, 0.5, rng)
        inst = gc.cheeger_cut(g)
        i0 = int(rng.choice(inst.feasible_indices()))
        a0 = decode(inst.f.kind, inst.f.n, inst.f.k, i0)
        tr = solve(inst, indicator(a0, inst.f.n, inst.f.kind), max_iter=100, seed=run)
        assert tr.extracted[1] <= Fraction(int(inst.f(a0)), int(inst.g(a0)))


def test_ipsd_certification():
    inst = gc.maxcut(bundled("c5"))
    tr = solve(inst, [1, -1, 1, -1, 0], max_iter=200, verify_eigen=True)
    assert tr.certified and tr.eigen_residual <= 1e-6


def test_ipsd_deterministic():
    inst = gc.frustration_index(bundled("neg_k3"))
    a = solve(inst, [1, 0, 0], max_iter=50, seed=4).to_json()
    b = solve(inst, [1, 0, 0], max_iter=50, seed=4).to_json()
    assert a == b


def test_normalized_scheme_zero_homogeneous_invariance():
    inst = gc.cheeger_cut(bundled("p4"))
    x0 = np.array([1.0, 0.5, 0.0, 0.0])
    opts = dict(max_iter=60, scheme="normalized")
    r1 = solve(inst, x0, **opts).ratios
    r2 = solve(inst, 2 * x0, **opts).ratios
    assert np.allclose([float(r) for r in r1], [float(r) for r in r2], atol=1e-9)


def test_generalized_modularity():
    g = bundled("p4")
    inst = gc.modularity(g)
    p = inst.ratio_problem(1.0)
    x0 = np.array([1.0, 1.0, 0.0, 0.0])
    tr = fp.ipsd_solve_generalized(p, x0, fp.SolveOptions(max_iter=100))
    assert tr.is_monotone()
    start = inst.F(x0[None])[0] / inst.G(x0[None])[0]
    assert float(tr.extracted[1]) >= start - 1e-12
    assert inst.value(tr.extracted[1]) <= O.modularity_max(4, O.edges_of(g))


def test_generalized_frustration_signed_triangle():
    inst = gc.frustration_index(bundled("neg_k3"), "indefinite")
    p = inst.ratio_problem(1.0)
    tr = fp.ipsd_solve_generalized(p, np.array([1.0, 0.0, 0.0]), fp.SolveOptions(max_iter=100))
    assert tr.is_monotone()
    assert tr.termination in fp.TERMINATIONS


def test_generalized_equals_plain_when_positive():
    inst = gc.maxcut(bundled("p4"))
    p = inst.ratio_problem(1.0)
    x0 = np.array([1.0, -1.0, 0.0, 1.0])
    o = fp.SolveOptions(max_iter=50, seed=1)
    a = fp.ipsd_solve(p, x0, o)
    b = fp.ipsd_solve_generalized(p, x0, o)
    assert a.ratios == b.ratios


# -- extraction


def test_extract_indicator():
    inst = gc.cheeger_cut(bundled("p4"))
    p = inst.ratio_problem()
    arg, val = fp.extract_best_settuple(p, indicator(0b0011, 4))
    assert arg == 0b0011 and val == Fraction(1, 3)


def test_extract_mincut_p3():
    inst = gc.mincut(bundled("p3"))
    p = inst.ratio_problem()
    x = np.array([1.0, 0.2, -1.0])
    arg, val = fp.extract_best_settuple(p, x)
    levels = fp.level_arguments(inst.f.kind, 3, 1, x)
    vals = [Fraction(int(inst.f(a)), int(inst.g(a))) for a in levels if inst.g(a) > 0]
    assert val == min(vals) == 1


def test_extract_no_feasible_level():
    inst = gc.mincut(bundled("p3"))
    with pytest.raises(fp.NoFeasibleLevelError):
        fp.extract_best_settuple(inst.ratio_problem(), np.ones(3))


# -- inner solves


def test_inner_linear_gives_vertex():
    c = np.array([1.0, -2.0, 0.5])
    res = fp.inner_convex_solve(lambda x: c @ x, lambda x: c, 3)
    assert np.allclose(res.x, -np.sign(c), atol=1e-2)
    ex = fp.inner_exact_solve([], c, 3)
    assert np.allclose(ex.x, -np.sign(c))


def test_inner_pl_minimum():
    lin = np.array([0.5, 0.5])

    def obj(x):
        return np.abs(x).sum() - lin @ x
    res = fp.inner_convex_solve(obj, lambda x: np.sign(x) - lin, 2, x0=np.zeros(2))
    assert res.value <= 1e-6
    ex = fp.inner_exact_solve([(1.0, fp.weighted_l1(np.ones(2)))], -lin, 2)
    assert ex.value <= 1e-9


def test_inner_strongly_convex_exact():
    rng = np.random.default_rng(5)
    for _ in range(20):
        lin = rng.standard_normal(2) * 2
        y = rng.uniform(-1, 1, 2)
        mu = 0.7
        res = fp.inner_exact_solve([(1.0, fp.weighted_l1(np.ones(2)))], -lin, 2, mu=mu, y=y)
        # separable: soft-threshold then clip to the box
        z = y + lin / (2 * mu)
        want = np.clip(np.sign(z) * np.maximum(np.abs(z) - 1 / (2 * mu), 0), -1, 1)
        assert np.linalg.norm(res.x - want) <= 1e-4


# -- normalized inverse power


def test_inverse_power_identical_pair():
    Q = fp.quadratic(np.eye(2))
    x0 = np.array([0.6, 0.8])
    x1, r = fp.inverse_power_step_normalized(Q, Q, x0)
    assert np.allclose(x1, x0) and r == pytest.approx(1.0)


def test_inverse_power_laplacian_p3():
    Lap = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]], dtype=float)
    F, G = fp.quadratic(Lap), fp.quadratic(np.eye(3))
    x0 = np.array([1.0, 0.3, -1.3])
    tr = fp.normalized_inverse_power(F, G, x0, max_iter=2000)
    assert tr.is_monotone()
    r, x = tr.value, tr.x
    assert r == pytest.approx(1.0, abs=1e-6)
    assert np.linalg.norm(Lap @ x - r * x) <= 1e-6
    rng = np.random.default_rng(6)
    a_seq = rng.uniform(0.5, 2, 5000)
    tr2 = fp.normalized_inverse_power(F, G, x0, max_iter=2000, a_seq=lambda k: a_seq[k])
    assert tr2.value == pytest.approx(r, abs=1e-6)


# -- recursive frustration


def test_frustration_recursive_examples():
    res = fp.frustration_recursive(bundled("neg_k3"), seed=0)
    assert res.count == 1
    rng = np.random.default_rng(7)
    x = rng.choice([-1, 1], size=7)
    es = [(i, j, 1.0, int(x[i] * x[j])) for i in range(7) for j in range(i + 1, 7)
          if rng.random() < 0.6]
    bal = gc.Graph(7, es)
    if bal.is_connected():
        assert fp.frustration_recursive(bal, seed=0).count == 0


def test_frustration_recursive_upper_bound():
    rng = np.random.default_rng(8)
    done = 0
    while done < 20:
        n = int(rng.integers(3, 11))
        if rng.random() < 0.3:
            x = rng.choice([-1, 1], size=n)
            g = gc.random_graph(n, 0.5, rng)
            g = gc.Graph(n, [(i, j, w, int(x[i] * x[j])) for i, j, w, _ in g.edges])
            balanced = True
        else:
            g = gc.random_graph(n, 0.5, rng, signed=True)
            balanced = False
        res = fp.frustration_recursive(g, fp.SolveOptions(max_iter=100), seed=done)
        truth = O.frustration(n, O.edges_of(g))
        assert res.count >= truth
        assert res.count == gc.frustration_counts(g, res.assignment[None, :])[0]
        if balanced:
            assert res.count == 0
        done += 1
