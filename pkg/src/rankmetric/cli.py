"""Command line interface: construct codes, compute invariants, reproduce
the reference table, and run the sampling experiments.

All commands are deterministic for fixed flags and seed; JSON output is
key-sorted so identical invocations are byte-identical.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click

from . import families as fam
from . import invariants as inv
from .codes import DEFAULT_BUDGET, RdCode
from .errors import RankMetricError


def _budget_default():
    return int(os.environ.get("RANKMETRIC_BUDGET", DEFAULT_BUDGET))


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _dump(obj, fmt, out):
    if fmt == "csv" and isinstance(obj, list) and obj and \
            isinstance(obj[0], dict):
        keys = list(obj[0].keys())
        lines = [",".join(keys)]
        for row in obj:
            lines.append(",".join(str(row[k]) for k in keys))
        _emit("\n".join(lines) + "\n", out)
    elif fmt == "table" and isinstance(obj, list) and obj and \
            isinstance(obj[0], dict):
        keys = list(obj[0].keys())
        widths = [max(len(k), *(len(str(r[k])) for r in obj)) for k in keys]
        lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
        for row in obj:
            lines.append("  ".join(str(row[k]).ljust(w)
                                   for k, w in zip(keys, widths)))
        _emit("\n".join(lines) + "\n", out)
    else:
        _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def family_options(fn):
    fn = click.option("--family", required=True,
                      help="family tag: G, H, C1..C5, D1..D5")(fn)
    fn = click.option("--q", type=int, default=None,
                      help="field size q (prime power)")(fn)
    fn = click.option("--n", type=int, default=None,
                      help="extension degree (G/H only)")(fn)
    fn = click.option("--k", type=int, default=None)(fn)
    fn = click.option("--s", type=int, default=None)(fn)
    fn = click.option("--eta", default=None,
                      help="twist element, 'g^i' or digit string")(fn)
    fn = click.option("--h", "h_twist", type=int, default=None,
                      help="twist exponent for H")(fn)
    fn = click.option("--delta", default=None)(fn)
    fn = click.option("--no-norm-check", is_flag=True,
                      help="build twisted codes even when no eta can "
                           "satisfy the norm condition")(fn)
    return fn


def common_options(fn):
    fn = click.option("--seed", type=int, default=0)(fn)
    fn = click.option("--budget", type=int, default=None)(fn)
    fn = click.option("--workers", type=int, default=1,
                      help="affects wall time only, never output")(fn)
    fn = click.option("--format", "fmt", default="json",
                      type=click.Choice(["json", "csv", "table"]))(fn)
    fn = click.option("--out", default=None, help="write to file")(fn)
    return fn


def _spec_from_flags(family, q, n, k, s, eta, h_twist, delta):
    tag = family.upper() if len(family) <= 2 else family
    spec = fam.default_spec(tag, q=q)
    p = spec.params
    for key, val in (("n", n), ("k", k), ("s", s),
                     ("eta", eta), ("h", h_twist), ("delta", delta)):
        if val is not None:
            p[key] = val
    return spec


def _build(spec, no_norm_check):
    return spec.build(check_norm=not no_norm_check)


@click.group()
def main():
    """Rank-metric codes: construction, invariants, distinguishers."""


def _wrap(fn):
    try:
        fn()
    except RankMetricError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(2)


@main.command()
@family_options
@common_options
def construct(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
              seed, budget, workers, fmt, out):
    """Build a family code and print its basis, dims and MRD status."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        mrd = C.is_mrd(budget=budget_, seed=seed)
        obj = C.to_json()
        obj["dim_fq"] = C.dim_fq
        if C.scalars == "fqn":
            obj["k_fqn"] = C.k_fqn
        obj["mrd_status"] = mrd.status
        obj["family"] = spec.describe()
        _dump(obj, fmt, out)
    _wrap(run)


@main.command()
@family_options
@common_options
def invariants(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
               seed, budget, workers, fmt, out):
    """Full invariant report: h, idealisers, index bounds, rank profile."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        rep = inv.invariant_report(C, budget=budget_, seed=seed)
        obj = rep.to_json()
        obj["family"] = spec.describe()
        _dump(obj, fmt, out)
    _wrap(run)


@main.command()
@common_options
def table1(seed, budget, workers, fmt, out):
    """Recompute the reference table and diff it against the fixture."""
    budget_ = budget if budget is not None else _budget_default()
    rows = []
    failed = False
    try:
        for tag in fam.TAGS:
            spec = fam.default_spec(tag)
            row = inv.table1_row(spec, budget=budget_, seed=seed)
            rows.append({
                "family": row["family"], "q": row["q"], "n": row["n"],
                "k": row["k"], "h": row["h"],
                "ind": f"{row['ind'][0]}..{row['ind'][1]}",
                "R_exp": row["R_exp"], "status": row["status"],
            })
            if row["status"] == inv.MISMATCH:
                failed = True
    except RankMetricError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(2)
    _dump(rows, fmt if fmt != "json" else "table", out)
    if failed:
        sys.exit(1)


@main.command("check-gab")
@family_options
@common_options
def check_gab(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
              seed, budget, workers, fmt, out):
    """Test equivalence to a generalized Gabidulin code."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        res = inv.is_equiv_gabidulin(C, budget=budget_, seed=seed)
        _dump({"family": spec.describe(), "equivalent": res is not None,
               "s": res}, fmt, out)
    _wrap(run)


@main.command("check-twisted")
@family_options
@common_options
def check_twisted(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
                  seed, budget, workers, fmt, out):
    """Run the twisted-Gabidulin recovery procedure."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        trace = {}
        w = inv.is_equiv_twisted(C, budget=budget_, seed=seed, trace=trace)
        if w is None:
            _dump({"family": spec.describe(), "equivalent": False,
                   "trace": {str(sk): v for sk, v in trace.items()}},
                  fmt, out)
        else:
            _dump({"family": spec.describe(), "equivalent": True,
                   "s": w.s, "eta": w.eta.to_string(),
                   "eta_norm": w.eta.norm().to_string(),
                   "p": w.p.to_json(),
                   "q_complement": w.q_complement.to_json()}, fmt, out)
    _wrap(run)


def _derived(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
             transform):
    spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
    ctx, C = _build(spec, no_norm_check)
    D = transform(C)
    obj = D.to_json()
    obj["dim_fq"] = D.dim_fq
    obj["family"] = spec.describe()
    return obj


@main.command()
@family_options
@common_options
def dual(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
         seed, budget, workers, fmt, out):
    """Delsarte dual of a family code."""
    _wrap(lambda: _dump(_derived(family, q, n, k, s, eta, h_twist, delta,
                                 no_norm_check, lambda C: C.dual()),
                        fmt, out))


@main.command()
@family_options
@common_options
def adjoint(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
            seed, budget, workers, fmt, out):
    """Adjoint (transpose) code of a family code."""
    _wrap(lambda: _dump(_derived(family, q, n, k, s, eta, h_twist, delta,
                                 no_norm_check, lambda C: C.adjoint_code()),
                        fmt, out))


@main.command()
@family_options
@common_options
def rankdist(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
             seed, budget, workers, fmt, out):
    """Exhaustive rank distribution as 'rank,count' CSV."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        _emit(C.rank_distribution(budget=budget_).as_csv(), out)
    _wrap(run)


@main.command()
@family_options
@common_options
def mindist(family, q, n, k, s, eta, h_twist, delta, no_norm_check,
            seed, budget, workers, fmt, out):
    """Minimum rank distance by exhaustive enumeration."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        spec = _spec_from_flags(family, q, n, k, s, eta, h_twist, delta)
        ctx, C = _build(spec, no_norm_check)
        _dump({"family": spec.describe(),
               "min_distance": C.min_distance(budget=budget_)}, fmt, out)
    _wrap(run)


@main.command("sample-mrd")
@click.option("--q", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--trials", type=int, default=100)
@common_options
def sample_mrd(q, n, k, trials, seed, budget, workers, fmt, out):
    """Fraction of random k-dimensional codes that are MRD."""
    def run():
        budget_ = budget if budget is not None else _budget_default()
        ctx = fam.context_for_q(q, n)
        frac = inv.mrd_fraction(ctx, k, trials, budget=budget_, seed=seed)
        _dump({"q": q, "n": n, "k": k, "trials": trials, "seed": seed,
               "fraction": frac}, fmt, out)
    _wrap(run)


if __name__ == "__main__":
    main()
