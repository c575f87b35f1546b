"""Command-line front end.

Commands: ``eval``, ``solve``, ``eigen``, ``oracle`` and ``check``.  Reports
go to stdout as JSON (default) or TSV; diagnostics go to stderr.

JSON reports carry ``"schema": "lovx/1"`` and the seed.  The only field
that changes between identical runs is ``"timestamp"`` (start time and
wall time); everything else is byte-identical for a fixed seed.

Exit codes: 0 success, 1 parse/config error, 2 solver output not
certified (``solve --verify``) or a failing ``check`` suite.

Set-function files (``--setfn``, ``--gfn``) are JSON objects

    {"n": 3, "kind": "powerset", "k": 1, "values": {"100": 1, "110": 2}}

Each key of ``values`` lists one digit per element, element 0 first:
0/1 for ``powerset``, 0/1/2 (none/first/second part) for ``pair``.  For
``kway`` and ``kway-pair`` the k blocks are joined with ``|``, e.g.
``"10|01"``.  Missing keys are 0; the empty argument must be 0.  An
optional ``"claims": ["submodular" | "bisubmodular" | "kway-submodular"]``
list is verified by ``check``.

Multistart: ``solve`` starts from every singleton indicator plus
``--multistart N`` random ternary (or 0/1) vectors; starts run on up to
``LOVX_THREADS`` worker threads and are reported in start order.
"""
from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

import click
import numpy as np

from . import eigen, fracprog, graphcat, lovasz, oracle
from .setfn import (KINDS, DomainError, EnumerationLimitError, SetFunction, encode, indicator,
                    is_bisubmodular, is_kway_submodular, is_submodular, members)

SCHEMA = "lovx/1"
ALGOS = ("dinkelbach", "ipsd", "ipsd-gen", "recursive-frustration")


class ConfigError(click.ClickException):
    exit_code = 1


# ---------------------------------------------------------------------------
# serialization


def num(v):
    """JSON number for an exact or float value."""
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2 ** 53 else round(v, 12)


def exact_str(v) -> str:
    return str(v) if isinstance(v, (Fraction, int, np.integer)) else repr(float(v))


def vertex_lists(arg, kind: str, n: int, ground=None):
    """Sorted vertex lists of a canonical argument (mapped through ``ground``)."""
    lab = (lambda v: ground[v]) if ground else (lambda v: v)

    def vs(mask):
        return sorted(lab(v) for v in members(int(mask), n))
    if kind == "powerset":
        return vs(arg)
    if kind == "pair":
        return [vs(arg[0]), vs(arg[1])]
    if kind == "kway":
        return [vs(a) for a in arg]
    return [[vs(a), vs(b)] for a, b in arg]


def emit(report: dict, output: str):
    if output == "tsv":
        rows = [(k, v) for k, v in report.items() if not isinstance(v, (dict, list))]
        click.echo("\n".join(f"{k}\t{v}" for k, v in rows))
    else:
        click.echo(json.dumps(report, sort_keys=True, indent=2))


def base_report(command: str, seed, started: float, t0: float) -> dict:
    return {"schema": SCHEMA, "command": command, "seed": seed,
            "timestamp": {"started": datetime.fromtimestamp(started, timezone.utc).isoformat(),
                          "wall_time_s": round(time.perf_counter() - t0, 6)}}


def strip_timestamp(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timestamp"}


# ---------------------------------------------------------------------------
# inputs


def parse_params(items) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise ConfigError(f"parameter {it!r} is not key=value")
        k, v = it.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def load_graph(src: Optional[str], fmt: Optional[str], base: int) -> graphcat.Graph:
    if not src:
        raise ConfigError("--graph is required")
    try:
        return graphcat.read_graph(src, fmt, base)
    except (OSError, ValueError, KeyError) as e:
        raise ConfigError(f"cannot read graph {src!r}: {e}")


def _parse_key(key: str, kind: str, n: int, k: int):
    blocks = key.split("|")
    if len(blocks) != (1 if kind in ("powerset", "pair") else k):
        raise ConfigError(f"key {key!r}: wrong number of blocks")
    args = []
    for b in blocks:
        if len(b) != n:
            raise ConfigError(f"key {key!r}: expected {n} digits per block")
        pos = neg = 0
        for i, ch in enumerate(b):
            if ch == "1":
                pos |= 1 << i
            elif ch == "2" and kind in ("pair", "kway-pair"):
                neg |= 1 << i
            elif ch != "0":
                raise ConfigError(f"key {key!r}: bad digit {ch!r}")
        args.append((pos, neg) if kind in ("pair", "kway-pair") else pos)
    return args[0] if kind in ("powerset", "pair") else tuple(args)


def read_setfn(path: str) -> tuple[SetFunction, dict]:
    """Load a set-function file; returns (function, header)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read set function {path!r}: {e}")
    try:
        n, kind, k = int(doc["n"]), doc.get("kind", "powerset"), int(doc.get("k", 1))
    except (KeyError, TypeError, ValueError):
        raise ConfigError(f"{path}: header needs integer 'n'")
    if kind not in KINDS:
        raise ConfigError(f"{path}: unknown kind {kind!r}")
    vals = doc.get("values", {})
    from .setfn import _domain_size
    size = _domain_size(kind, n, k)
    exact = all(isinstance(v, int) for v in vals.values())
    t = np.zeros(size, dtype=np.int64 if exact else float)
    empty_value = 0
    for key, v in vals.items():
        try:
            idx = encode(kind, n, k, _parse_key(key, kind, n, k))
        except DomainError as e:
            raise ConfigError(f"{path}: {e}")
        if idx == 0:
            empty_value = v
        t[idx] = v
    header = {"n": n, "kind": kind, "k": k, "claims": list(doc.get("claims", [])),
              "empty_value": empty_value, "name": doc.get("name", os.path.basename(path))}
    return SetFunction(n, kind, k, table=t, name=header["name"]), header


def parse_point(text: str, dim: int) -> np.ndarray:
    try:
        x = np.array([float(v) for v in text.replace(",", " ").split()])
    except ValueError:
        raise ConfigError(f"bad point {text!r}")
    if x.shape != (dim,):
        raise ConfigError(f"point has {x.size} coordinates, expected {dim}")
    return x


def build(problem: str, graph, params: dict) -> graphcat.ProblemInstance:
    try:
        return graphcat.build_problem(problem, graph, **params)
    except KeyError as e:
        raise ConfigError(str(e).strip("'\""))
    except (DomainError, EnumerationLimitError, ValueError, TypeError) as e:
        raise ConfigError(f"{problem}: {e}")


# ---------------------------------------------------------------------------
# commands


graph_opts = [
    click.option("--graph", "graph_src", help="Bundled name, file path, or literal edge list."),
    click.option("--format", "fmt", type=click.Choice(["edge-list", "dimacs"]), default=None),
    click.option("--base", type=int, default=0, show_default=True, help="Edge-list vertex base."),
]
out_opt = click.option("--output", type=click.Choice(["json", "tsv"]), default="json",
                       show_default=True)
param_opt = click.option("--param", "params", multiple=True, metavar="KEY=VALUE",
                         help="Problem parameter (JSON value), repeatable.")


def with_opts(opts):
    def deco(fn):
        for o in reversed(opts):
            fn = o(fn)
        return fn
    return deco


@click.group()
@click.version_option(package_name="lovx")
def main():
    """Lovász-extension toolkit for discrete ratio problems on graphs."""


@main.command("oracle")
@click.option("--problem", required=True, type=click.Choice(graphcat.PROBLEMS))
@with_opts(graph_opts)
@param_opt
@out_opt
@click.option("--seed", type=int, default=0, show_default=True)
def oracle_cmd(problem, graph_src, fmt, base, params, output, seed):
    """Exact optimum of a catalog problem by enumeration."""
    t0, started = time.perf_counter(), time.time()
    g = load_graph(graph_src, fmt, base)
    inst = build(problem, g, parse_params(params))
    try:
        val, res = inst.discrete_optimum()
    except EnumerationLimitError as e:
        raise ConfigError(str(e))
    wits = [_witness_json(inst, w) for w in res.witnesses]
    rep = base_report("oracle", seed, started, t0)
    rep.update({"problem": inst.to_json(), "value": num(val), "value_exact": exact_str(val),
                "witnesses": wits, "evaluations": res.evaluations,
                "witness_check": _recheck(inst, res)})
    if "raw_scale" in inst.extras:
        rep["raw_value"] = num(inst.extras["raw_scale"] * val)
    rep["timestamp"]["wall_time_s"] = round(time.perf_counter() - t0, 6)
    emit(rep, output)


def _witness_json(inst, w):
    if isinstance(w, list):            # partition blocks
        return [members(int(b), inst.graph.n) for b in w]
    if isinstance(w, np.ndarray):      # sign vector
        return [[int(i) for i in np.nonzero(w > 0)[0]], [int(i) for i in np.nonzero(w < 0)[0]]]
    return vertex_lists(w, inst.kind, inst.f.n, inst.ground)


def _recheck(inst, res) -> bool:
    """Every witness re-evaluates to the reported optimum."""
    for w in res.witnesses:
        if isinstance(w, (list, np.ndarray)):
            continue               # partition/sign oracles evaluate their own objective
        v = oracle.ratio_value(inst.f(w), inst.g(w))
        if v != res.optimum and abs(float(v) - float(res.optimum)) > 1e-9:
            return False
    return True


@main.command("solve")
@click.option("--problem", required=True, type=click.Choice(graphcat.PROBLEMS))
@with_opts(graph_opts)
@param_opt
@click.option("--algo", type=click.Choice(ALGOS), default="ipsd", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iter", type=int, default=200, show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--multistart", type=int, default=4, show_default=True,
              help="Random starts in addition to the singleton indicators.")
@click.option("--prox", type=float, default=1.0, show_default=True, help="Proximal weight.")
@click.option("--scheme", type=click.Choice(["ball", "normalized"]), default="ball", show_default=True)
@click.option("--verify/--no-verify", default=False, help="Eigen-certify the best result.")
@click.option("--thin", type=int, default=50, show_default=True, help="Max iterates in trace.")
@out_opt
@click.option("-v", "--verbose", count=True)
def solve_cmd(problem, graph_src, fmt, base, params, algo, seed, max_iter, tol, multistart,
              prox, scheme, verify, thin, output, verbose):
    """Solve a catalog problem with an iterative scheme."""
    t0, started = time.perf_counter(), time.time()
    if tol <= 0:
        raise ConfigError("--tol must be positive")
    if max_iter < 1 or multistart < 0:
        raise ConfigError("--max-iter must be >= 1 and --multistart >= 0")
    g = load_graph(graph_src, fmt, base)
    inst = build(problem, g, parse_params(params))
    rep = base_report("solve", seed, started, t0)
    rep.update({"problem": inst.to_json(), "algorithm": algo})
    opts = fracprog.SolveOptions(max_iter=max_iter, tol=tol, scheme=scheme, seed=seed,
                                 verify_eigen=verify)
    code = 0
    if algo == "recursive-frustration":
        if not problem.startswith("frustration"):
            raise ConfigError("recursive-frustration applies to the frustration problem only")
        res = fracprog.frustration_recursive(g, opts, multistart=multistart, prox_weight=prox,
                                             seed=seed)
        x = res.assignment
        rep.update({"value": num(res.count), "raw_value": num(2 * res.count),
                    "rounds": res.rounds,
                    "witness": [[int(i) for i in np.nonzero(x > 0)[0]],
                                [int(i) for i in np.nonzero(x < 0)[0]]]})
    elif algo == "dinkelbach":
        if inst.f is None:
            raise ConfigError(f"{problem} has no tabulated formulation at this size")
        tr = fracprog.dinkelbach_discrete(inst.f, inst.g, inst.sense, inst.family)
        arg = tr.iterates[-1][0]
        rep.update({"value": num(inst.value(tr.value)), "ratio": num(tr.value),
                    "witness": vertex_lists(arg, inst.kind, inst.f.n, inst.ground),
                    "trace": {"ratios": [num(r) for _, r in tr.iterates],
                              "iterations": len(tr.iterates) - 1,
                              "termination": tr.termination}})
    else:
        if inst.components is None:
            raise ConfigError(f"{problem} has no iterative formulation")
        if algo == "ipsd" and inst.generalized:
            raise ConfigError(f"{problem} has a sign-changing numerator; use --algo ipsd-gen")
        p = inst.ratio_problem(prox)
        rng = np.random.default_rng(seed)
        starts = fracprog.singleton_starts(p) + [fracprog.random_start(p, rng)
                                                 for _ in range(multistart)]
        if not starts:
            raise ConfigError("no feasible start")
        solver = fracprog.ipsd_solve if algo == "ipsd" else fracprog.ipsd_solve_generalized

        def run(x0):
            return solver(p, x0, opts)
        threads = max(1, int(os.environ.get("LOVX_THREADS", "1") or 1))
        try:
            if threads > 1:
                with ThreadPoolExecutor(threads) as ex:
                    traces = list(ex.map(run, starts))
            else:
                traces = [run(s) for s in starts]
        except ValueError as e:
            raise ConfigError(str(e))
        best_i = _best_trace(traces, inst.sense)
        best = traces[best_i]
        if verbose:
            for i, tr in enumerate(traces):
                click.echo(f"start {i}: {tr.value} ({tr.termination})", err=True)
        rep["starts"] = [{"index": i, "ratio": num(tr.value), "termination": tr.termination,
                          "iterations": len(tr.iterates) - 1,
                          "extracted": None if tr.extracted is None else num(tr.extracted[1])}
                         for i, tr in enumerate(traces)]
        rep["best_start"] = best_i
        rep["trace"] = best.to_json(thin)
        if best.extracted is not None:
            arg, val = best.extracted
            rep.update({"value": num(inst.value(val)), "ratio": num(val),
                        "witness": vertex_lists(arg, inst.kind, inst.f.n, inst.ground),
                        "witness_check": oracle.ratio_value(inst.f(arg), inst.g(arg)) == val
                        or abs(float(oracle.ratio_value(inst.f(arg), inst.g(arg))) - float(val))
                        <= 1e-9})
            if "raw_scale" in inst.extras:
                rep["raw_value"] = num(inst.extras["raw_scale"] * inst.value(val))
        else:
            rep.update({"value": num(inst.value(best.value)), "ratio": num(best.value)})
        if verify:
            # None: the dimension is beyond the certification limit
            rep["certified"] = best.certified
            if best.certified is False:
                code = 2
    rep["timestamp"]["wall_time_s"] = round(time.perf_counter() - t0, 6)
    emit(rep, output)
    sys.exit(code)


def _best_trace(traces, sense) -> int:
    def key(tr):
        v = tr.extracted[1] if tr.extracted is not None else tr.value
        return float(v) if sense == "min" else -float(v)
    return min(range(len(traces)), key=lambda i: (key(traces[i]), i))


@main.command("eigen")
@click.option("--pair", "pair", type=click.Choice(["cut", "signed", "problem", "file"]),
              default="cut", show_default=True)
@click.option("--problem", type=click.Choice(graphcat.PROBLEMS), default=None)
@with_opts(graph_opts)
@param_opt
@click.option("--setfn", type=click.Path(), default=None)
@click.option("--gfn", type=click.Path(), default=None)
@click.option("--certificates/--no-certificates", default=False)
@click.option("--seed", type=int, default=0, show_default=True)
@out_opt
def eigen_cmd(pair, problem, graph_src, fmt, base, params, setfn, gfn, certificates, seed,
              output):
    """Enumerate the eigenvalues of a set-function pair (dimension <= 8)."""
    t0, started = time.perf_counter(), time.time()
    if pair == "file":
        if not (setfn and gfn):
            raise ConfigError("--pair file needs --setfn and --gfn")
        f, _ = read_setfn(setfn)
        g, _ = read_setfn(gfn)
    else:
        gr = load_graph(graph_src, fmt, base)
        if pair == "cut":
            f, g = eigen.cut_pair(gr)
        elif pair == "signed":
            if not gr.is_signed:
                raise ConfigError("--pair signed needs a signed graph")
            f, g = eigen.signed_pair(gr)
        else:
            if problem is None:
                raise ConfigError("--pair problem needs --problem")
            inst = build(problem, gr, parse_params(params))
            if inst.f is None:
                raise ConfigError(f"{problem} has no tabulated formulation")
            f, g = inst.f, inst.g
    try:
        eig = eigen.enumerate_eigenvalues(f, g)
    except (EnumerationLimitError, DomainError) as e:
        raise ConfigError(str(e))
    rep = base_report("eigen", seed, started, t0)
    rep.update({"pair": pair, "f": f.name, "g": g.name, "kind": f.kind, "n": f.n,
                "eigenvalues": [num(lam) for lam, _ in eig],
                "eigenvalues_exact": [exact_str(lam) for lam, _ in eig],
                "eigensets": [vertex_lists(a, f.kind, f.n) for _, a in eig]})
    if certificates:
        rep["certificates"] = [eigen.verify_eigenpair(f, g, lam, a).to_json() for lam, a in eig]
    rep["timestamp"]["wall_time_s"] = round(time.perf_counter() - t0, 6)
    emit(rep, output)


@main.command("eval")
@click.option("--problem", type=click.Choice(graphcat.PROBLEMS), default=None)
@with_opts(graph_opts)
@param_opt
@click.option("--setfn", type=click.Path(), default=None)
@click.option("--x", "point", required=True, help="Point, comma or space separated.")
@click.option("--seed", type=int, default=0, show_default=True)
@out_opt
def eval_cmd(problem, graph_src, fmt, base, params, setfn, point, seed, output):
    """Evaluate extensions (and catalog closed forms) at a point."""
    t0, started = time.perf_counter(), time.time()
    rep = base_report("eval", seed, started, t0)
    if setfn:
        f, header = read_setfn(setfn)
        x = parse_point(point, f.n * f.k)
        val, grad = lovasz.extension_with_grad(f)(x)
        rep.update({"setfn": header["name"], "kind": f.kind, "x": [num(v) for v in x],
                    "value": num(val), "subgradient": [num(v) for v in np.ravel(grad)]})
    elif problem:
        g = load_graph(graph_src, fmt, base)
        inst = build(problem, g, parse_params(params))
        x = parse_point(point, inst.dim)
        rep.update({"problem": inst.to_json(), "x": [num(v) for v in x]})
        if inst.F is not None:
            F, G = float(inst.F(x)), float(inst.G(x))
            rep.update({"F": num(F), "G": num(G), "ratio": num(F / G) if G > 0 else None})
        if inst.f is not None:
            fl = float(lovasz.extension(inst.f)(x))
            gl = float(lovasz.extension(inst.g)(x))
            rep.update({"fL": num(fl), "gL": num(gl)})
    else:
        raise ConfigError("give --setfn or --problem")
    rep["timestamp"]["wall_time_s"] = round(time.perf_counter() - t0, 6)
    emit(rep, output)


# ---------------------------------------------------------------------------
# check suites


SUITES = ("cross-form", "tables", "identities", "discrete-continuous")


def suite_cross_form(rng) -> tuple[bool, Any]:
    for _ in range(10):
        n = 4
        f = SetFunction(n, table=rng.integers(-5, 6, 1 << n))
        X = rng.standard_normal((50, n))
        for x in X:
            a = lovasz.eval_original(f, x).value
            b = lovasz.eval_original_integral(f, x)
            c = lovasz.eval_original_mobius(f, x)
            if max(abs(a - b), abs(a - c)) > 1e-9:
                return False, {"table": f.table().tolist(), "x": x.tolist()}
        fp = SetFunction(n, "pair", table=rng.integers(-5, 6, 3 ** n))
        for x in X:
            a = lovasz.eval_disjoint_pair(fp, x).value
            b = lovasz.eval_disjoint_pair_integral(fp, x)
            if abs(a - b) > 1e-9:
                return False, {"table": fp.table().tolist(), "x": x.tolist()}
    return True, None


def suite_tables(rng) -> tuple[bool, Any]:
    for gname in ("k3", "p4", "petersen"):
        gr = graphcat.bundled_graph(gname)
        for entry in lovasz.TABLE1 + lovasz.TABLE2:
            F = lovasz.closed_form(entry, gr)
            ext = lovasz.extension(lovasz.catalog_setfunction(entry, gr))
            X = rng.standard_normal((100, gr.n))
            err = float(np.max(np.abs(F(X) - ext(X))))
            if err > 1e-9:
                return False, {"graph": gname, "entry": entry, "error": err}
    return True, None


def suite_identities(rng) -> tuple[bool, Any]:
    for which in ("3.13", "3.14", "3.15", "3.16"):
        for _ in range(5):
            n = 4
            kind, size = ("pair", 3 ** n) if which == "3.15" else ("powerset", 1 << n)
            f = SetFunction(n, kind, table=rng.integers(1, 9, size))
            g = SetFunction(n, kind, table=rng.integers(1, 9, size))
            rep = oracle.check_reduction_identities(f, g, which, a=-1.0, b=2.0)
            if not rep.ok:
                return False, {"identity": which, "detail": str(rep)}
    return True, None


def suite_discrete_continuous(rng) -> tuple[bool, Any]:
    for gname in ("k3", "p4", "c5", "k4"):
        gr = graphcat.bundled_graph(gname)
        for prob in ("maxcut", "mincut", "cheeger", "independence", "normalized-cut"):
            inst = graphcat.build_problem(prob, gr)
            opt, _ = inst.discrete_optimum()
            X = inst.sample_points(rng, 500)
            r = inst.value(np.asarray(inst.F(X)) / np.asarray(inst.G(X)))
            bad = r < float(opt) - 1e-9 if inst.sense == "min" else r > float(opt) + 1e-9
            if np.any(bad):
                return False, {"graph": gname, "problem": prob,
                               "x": X[int(np.argmax(bad))].tolist()}
            idx = inst.feasible_indices()
            Xi = inst.indicator_matrix(idx)
            ri = np.asarray(inst.F(Xi)) / np.asarray(inst.G(Xi))
            best = ri.min() if inst.sense == "min" else ri.max()
            if abs(inst.value(best) - float(opt)) > 1e-9:
                return False, {"graph": gname, "problem": prob, "indicator_best": float(best)}
    return True, None


def check_setfn_file(path: str) -> list[tuple[str, bool, Any]]:
    f, header = read_setfn(path)
    out = [("normalized", header["empty_value"] == 0,
            None if header["empty_value"] == 0 else {"argument": "empty",
                                                     "value": header["empty_value"]})]
    checks = {"submodular": is_submodular, "bisubmodular": is_bisubmodular,
              "kway-submodular": is_kway_submodular}
    for claim in header["claims"]:
        if claim not in checks:
            raise ConfigError(f"unknown claim {claim!r}")
        c = checks[claim](f)
        out.append((claim, bool(c.ok), None if c.ok else {"witness": _plain_witness(c.witness),
                                                          "gap": num(c.gap)}))
    # indicator exactness of the extension
    ext = lovasz.extension(f)
    from .setfn import decode
    t = f.table()
    for i in range(f.size):
        x = indicator(decode(f.kind, f.n, f.k, i), f.n, f.kind)
        if abs(float(ext(x)) - float(t[i])) > 1e-9:
            out.append(("indicator", False, {"index": i}))
            break
    else:
        out.append(("indicator", True, None))
    return out


def _plain_witness(w):
    if isinstance(w, (tuple, list)):
        return [_plain_witness(v) for v in w]
    return int(w) if isinstance(w, (int, np.integer)) else w


@main.command("check")
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES + ("all",)),
              default=("all",), show_default=True)
@click.option("--setfn", type=click.Path(), default=None,
              help="Check a set-function file instead of the built-in suites.")
@click.option("--seed", type=int, default=0, show_default=True)
@out_opt
def check_cmd(suites, setfn, seed, output):
    """Run invariant suites; nonzero exit on any failure."""
    t0, started = time.perf_counter(), time.time()
    rng = np.random.default_rng(seed)
    results = []
    if setfn:
        results = check_setfn_file(setfn)
    else:
        names = SUITES if "all" in suites else tuple(s for s in SUITES if s in suites)
        fns = {"cross-form": suite_cross_form, "tables": suite_tables,
               "identities": suite_identities, "discrete-continuous": suite_discrete_continuous}
        for s in names:
            ok, cex = fns[s](rng)
            results.append((s, ok, cex))
    for name, ok, cex in results:
        click.echo(f"{'PASS' if ok else 'FAIL'} {name}" + ("" if ok else f" {json.dumps(cex)}"),
                   err=True)
    rep = base_report("check", seed, started, t0)
    rep["suites"] = [{"name": n, "pass": ok, "counterexample": cex} for n, ok, cex in results]
    rep["pass"] = all(ok for _, ok, _ in results)
    rep["timestamp"]["wall_time_s"] = round(time.perf_counter() - t0, 6)
    emit(rep, output)
    sys.exit(0 if rep["pass"] else 2)


if __name__ == "__main__":
    main()
