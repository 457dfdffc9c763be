"""Command-line front end.

Exit codes: 0 success, 1 a checked identity failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable

from . import dedekind as ded
from . import oracle, quadfield, toddseries, zetavalues
from .contfrac import ncf_expand
from .exactmath import format_rat

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
JOBS_ENV = "TORICZETA_JOBS"
NUMERIC_NMAX = 1
FORMATS = ("table", "json", "csv")
SUITES = ("todd", "reciprocity", "evenodd", "cyclotomic", "bridge", "classical", "zeta", "cyclic", "additivity")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    format: str = "table"
    jobs: int = 1

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> RunConfig:
        try:
            cfg = cls(obj["subcommand"], dict(obj.get("params", {})), obj.get("format", "table"), int(obj.get("jobs", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed config: {exc}") from None
        if cfg.subcommand not in HANDLERS:
            raise UsageError(f"unknown subcommand {cfg.subcommand!r} in config")
        if cfg.format not in FORMATS:
            raise UsageError(f"unknown format {cfg.format!r} in config")
        return cfg


@dataclass
class Outcome:
    result: object
    table: list[list[str]]
    headers: list[str]
    text: str | None = None
    ok: bool = True
    witness: str | None = None


# --- helpers -----------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _type_pq(p: int, q: int) -> tuple[int, int]:
    if q < 1:
        raise UsageError(f"q must be positive, got {q}")
    if gcd(p, q) != 1:
        raise UsageError(f"gcd({p}, {q}) != 1")
    return p % q, q


def _pmap(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _coprime_pairs(qmax: int, qmin: int = 1) -> list[tuple[int, int]]:
    return [(p, q) for q in range(qmin, qmax + 1) for p in range(q) if gcd(p, q) == 1]


def _bseqs(rmax: int, bmax: int) -> list[tuple[int, ...]]:
    import itertools

    out = []
    for r in range(1, rmax + 1):
        for b in itertools.product(range(2, bmax + 1), repeat=r):
            if any(v != 2 for v in b):
                out.append(b)
    return out


# --- subcommands ---------------------------------------------------------


def cmd_todd(cfg: RunConfig) -> Outcome:
    prm = cfg.params
    p, q = _type_pq(int(prm["p"]), int(prm["q"]))
    degree, method = int(prm["degree"]), prm.get("method", "cf")
    if degree < 0:
        raise UsageError("degree must be nonnegative")
    if method == "nonsingular" and q != 1:
        raise UsageError("method 'nonsingular' needs q = 1")
    if method == "all":
        exact = {"cf": toddseries.todd_cf(p, q, degree), "ppd": toddseries.todd_ppd(p, q, degree)}
        if q == 1:
            exact["nonsingular"] = toddseries.todd_nonsingular(degree)
        approx = toddseries.todd_cyclotomic(p, q, degree)
        ref = exact["ppd"]
        rows, agree = [], {}
        for name, t in exact.items():
            agree[name] = t.series == ref.series
            rows.append([name, "exact", str(agree[name])])
        dev = approx.max_deviation(ref)
        agree["cyclotomic"] = dev < 1e-9
        rows.append(["cyclotomic", f"{dev:.3e}", str(agree["cyclotomic"])])
        result = {"p": p, "q": q, "degree": degree, "series": str(ref), "agreement": agree}
        bad = [k for k, v in agree.items() if not v]
        return Outcome(
            result,
            rows,
            ["method", "deviation", "agrees_with_ppd"],
            text=str(ref) + "\n" + _render_table(["method", "deviation", "agrees_with_ppd"], rows),
            ok=not bad,
            witness=f"methods {bad} disagree with ppd at (p, q) = ({p}, {q})" if bad else None,
        )
    if method == "cyclotomic":
        approx = toddseries.todd_cyclotomic(p, q, degree)
        recs = [
            {"i": i, "j": j, "value": repr(float(v.real)), "imag": repr(float(v.imag))}
            for (i, j), v in sorted(approx.coeffs.items(), key=lambda kv: (sum(kv[0]), -kv[0][0]))
        ]
        rows = [[str(r["i"]), str(r["j"]), r["value"], r["imag"]] for r in recs]
        return Outcome({"p": p, "q": q, "degree": degree, "coefficients": recs}, rows, ["i", "j", "value", "imag"])
    t = toddseries.todd_series(p, q, degree, method)
    out = t.to_json()
    rows = [[str(r["i"]), str(r["j"]), r["value"]] for r in out["coefficients"]]
    return Outcome(out, rows, ["i", "j", "value"], text=str(t))


def cmd_dedekind(cfg: RunConfig) -> Outcome:
    prm = cfg.params
    i, j, p, q = (int(prm[k]) for k in ("i", "j", "p", "q"))
    method = prm.get("method", "direct")
    if q < 1:
        raise UsageError(f"q must be positive, got {q}")
    if gcd(p, q) != 1:
        raise UsageError(f"gcd({p}, {q}) != 1")
    if i < 0 or j < 0:
        raise UsageError("i and j must be nonnegative")
    if method in ("todd", "both") and (i < 1 or j < 1):
        raise UsageError("the Todd route needs i, j >= 1")
    s_direct = ded.dedekind_direct_fast(i, j, p, q) if method in ("direct", "both") else None
    s_todd = ded.dedekind_via_todd(i, j, p, q) if method in ("todd", "both") else None
    agree = None if method != "both" else s_direct == s_todd
    value = s_direct if s_direct is not None else s_todd
    rec = {
        "i": i,
        "j": j,
        "p": p,
        "q": q,
        "s_direct": None if s_direct is None else format_rat(s_direct),
        "s_via_todd": None if s_todd is None else format_rat(s_todd),
        "agree": agree,
    }
    headers = ["i", "j", "p", "q", "s_direct", "s_via_todd", "agree?"]
    row = [str(rec[k]) if rec[k] is not None else "-" for k in ("i", "j", "p", "q", "s_direct", "s_via_todd", "agree")]
    text = format_rat(value) if method != "both" else None
    return Outcome(
        rec,
        [row],
        headers,
        text=text,
        ok=agree is not False,
        witness=None if agree is not False else f"s_{i},{j}({p},{q}): direct {s_direct} != via Todd {s_todd}",
    )


def _zeta_record(args: tuple[tuple[int, ...], int, tuple[str, ...]]) -> dict:
    b, n, routes = args
    data = quadfield.build(b)
    vals: dict[str, object] = {}
    if "field" in routes:
        vals["field"] = zetavalues.zeta_field(data, n)
    if "general" in routes:
        vals["general"] = zetavalues.zeta_general_field(data, n)
    if "zero" in routes and n == 0:
        vals["zero"] = zetavalues.zeta_zero(data.b)
    exact = [v for v in vals.values()]
    agree = all(v == exact[0] for v in exact)
    numeric_checked = False
    if "numeric" in routes:
        fit = oracle.fit_zeta(data, n_max=max(n, 1))
        approx = fit.zeta_hat[n]
        vals["numeric"] = approx
        # the default schedule resolves c_0 and c_1 only; higher n are reported, not judged
        if exact and n <= NUMERIC_NMAX and not fit.ill_conditioned:
            ref = float(exact[0])
            tol = 1e-3 if n == 0 else 1e-2 * abs(ref)
            agree = agree and abs(approx - ref) <= tol
            numeric_checked = True
    zeta = exact[0] if exact else None
    return {
        "b": list(b),
        "n": n,
        "zeta": None if zeta is None else format_rat(zeta),
        "routes": {k: (format_rat(v) if isinstance(v, Fraction) else v) for k, v in vals.items()},
        "agree": agree,
        "numeric_checked": numeric_checked,
    }


def cmd_zeta(cfg: RunConfig) -> Outcome:
    prm = cfg.params
    try:
        b = quadfield.BSeq(tuple(prm["b"])).entries
    except quadfield.QuadFieldError as exc:
        raise UsageError(str(exc)) from None
    ns = [int(prm["n"])] if prm.get("nmax") is None else list(range(int(prm["nmax"]) + 1))
    if any(n < 0 for n in ns):
        raise UsageError("n must be nonnegative")
    routes = tuple(prm.get("routes", ["field"]))
    unknown = set(routes) - {"field", "general", "numeric", "zero"}
    if unknown:
        raise UsageError(f"unknown routes {sorted(unknown)}")
    recs = _pmap(_zeta_record, [(b, n, routes) for n in ns], cfg.jobs)
    headers = ["b", "n", "zeta", *routes, "agree"]
    rows = [
        [",".join(map(str, r["b"])), str(r["n"]), str(r["zeta"]), *(str(r["routes"].get(k, "-")) for k in routes), str(r["agree"])]
        for r in recs
    ]
    bad = [r for r in recs if not r["agree"]]
    text = None
    if len(recs) == 1 and routes == ("field",):
        text = recs[0]["zeta"]
    return Outcome(
        recs if len(recs) > 1 else recs[0],
        rows,
        headers,
        text=text,
        ok=not bad,
        witness=None if not bad else f"routes disagree for b={bad[0]['b']}, n={bad[0]['n']}: {bad[0]['routes']}",
    )


# verify: each case function returns None on success or a witness string


def _case_todd(args) -> str | None:
    p, q, d = args
    if toddseries.todd_cf(p, q, d).series != toddseries.todd_ppd(p, q, d).series:
        return f"todd_cf != todd_ppd at (p, q, D) = ({p}, {q}, {d})"
    return None


def _case_reciprocity(args) -> str | None:
    p, q, d = args
    rep = toddseries.check_reciprocity(p, q, d)
    return None if rep.ok else f"reciprocity fails at (p, q, D) = ({p}, {q}, {d}): {rep.residual}"


def _case_evenodd(args) -> str | None:
    p, q, d = args
    return None if toddseries.check_even_odd_identity(p, q, d) else f"even/odd identity fails at ({p}, {q}, {d})"


def _case_cyclotomic(args) -> str | None:
    p, q, d = args
    dev = toddseries.todd_cyclotomic(p, q, d).max_deviation(toddseries.todd_ppd(p, q, d))
    return None if dev < 1e-9 else f"cyclotomic deviation {dev:.3e} at ({p}, {q}, {d})"


def _case_bridge(args) -> str | None:
    p, q, d = args
    pairs = [(i, j) for i in range(1, d) for j in range(1, d + 1 - i)]
    direct = ded.dedekind_direct_table(p, q, d, pairs)
    for i, j in pairs:
        v = ded.dedekind_via_todd(i, j, p, q)
        if v != direct[(i, j)]:
            return f"s_{i},{j}({p},{q}): via Todd {v} != direct {direct[(i, j)]}"
    return None


def _case_classical(args) -> str | None:
    p, q = args
    lhs = ded.classical_dedekind(p, q) + ded.classical_dedekind(q, p)
    rhs = ded.classical_reciprocity_rhs(p, q)
    return None if lhs == rhs else f"s({p},{q}) + s({q},{p}) = {lhs} != {rhs}"


def _case_zeta(args) -> str | None:
    b, nmax = args
    data = quadfield.build(b)
    if zetavalues.zeta_field(data, 0) != zetavalues.zeta_zero(data.b):
        return f"zeta_field({b}, 0) != closed form"
    for n in range(nmax + 1):
        zf, zg = zetavalues.zeta_field(data, n), zetavalues.zeta_general_field(data, n)
        if zf != zg:
            return f"b={b}, n={n}: zeta_field {zf} != zeta_general {zg}"
        e = zetavalues.error_term(data, n)
        if e != 0:
            return f"b={b}, n={n}: error term {e} != 0"
    return None


def _case_cyclic(args) -> str | None:
    b, nmax = args
    seq = quadfield.BSeq(b)
    for n in range(nmax + 1):
        ref = zetavalues.zeta_field(seq, n)
        for k in range(1, seq.r):
            v = zetavalues.zeta_field(seq.rotate(k), n)
            if v != ref:
                return f"b={b} rotated by {k}, n={n}: {v} != {ref}"
    return None


def _case_additivity(args) -> str | None:
    b, nmax = args
    data = quadfield.build(b)
    for n in range(nmax + 1):
        whole = zetavalues.zeta_general_field(data, n)
        for k in range(1, data.r):
            parts = zetavalues.subdivided_zeta(data, k, n)
            if sum(parts) != whole:
                return f"b={b}, n={n}, split at A_{k}: {parts} do not sum to {whole}"
    return None


def _verify_cases(suite: str, prm: dict) -> tuple[Callable, list]:
    qmax = int(prm.get("qmax", 30))
    degree = int(prm.get("degree", 8))
    nmax = int(prm.get("nmax", 2))
    rmax, bmax = int(prm.get("rmax", 3)), int(prm.get("bmax", 5))
    if suite == "todd":
        return _case_todd, [(p, q, degree) for p, q in _coprime_pairs(qmax)]
    if suite == "reciprocity":
        return _case_reciprocity, [(p, q, degree) for p, q in _coprime_pairs(qmax, 2) if p > 0]
    if suite == "evenodd":
        return _case_evenodd, [(p, q, degree) for p, q in _coprime_pairs(qmax)]
    if suite == "cyclotomic":
        return _case_cyclotomic, [(p, q, degree) for p, q in _coprime_pairs(qmax)]
    if suite == "bridge":
        return _case_bridge, [(p, q, degree) for p, q in _coprime_pairs(qmax)]
    if suite == "classical":
        return _case_classical, [(p, q) for q in range(2, qmax + 1) for p in range(1, q) if gcd(p, q) == 1]
    if suite == "zeta":
        return _case_zeta, [(b, nmax) for b in _bseqs(rmax, bmax)]
    if suite == "cyclic":
        return _case_cyclic, [(b, nmax) for b in _bseqs(rmax, bmax)]
    if suite == "additivity":
        return _case_additivity, [(b, nmax) for b in _bseqs(rmax, bmax) if len(b) > 1]
    raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")


def cmd_verify(cfg: RunConfig) -> Outcome:
    prm = cfg.params
    suites = list(SUITES) if prm.get("suite", "all") == "all" else [prm["suite"]]
    rows, recs, first_bad = [], [], None
    for suite in suites:
        fn, cases = _verify_cases(suite, prm)
        res = _pmap(fn, cases, cfg.jobs)
        fails = [w for w in res if w is not None]
        recs.append({"suite": suite, "checked": len(cases), "failures": len(fails), "witness": fails[0] if fails else None})
        rows.append([suite, str(len(cases)), str(len(fails)), "PASS" if not fails else "FAIL"])
        if fails and first_bad is None:
            first_bad = f"{suite}: {fails[0]}"
    return Outcome(recs, rows, ["suite", "checked", "failures", "status"], ok=first_bad is None, witness=first_bad)


def _timed(fn: Callable, repeat: int) -> tuple[float, object]:
    best, val = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        val = fn()
        best = min(best, time.perf_counter() - t0)
    return best, val


def bench_rows(qs: Iterable[int], seed: int = 0, repeat: int = 3, i: int = 1, j: int = 1) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for q in qs:
        while True:
            p = rng.randrange(1, q) if q > 1 else 0
            if gcd(p, q) == 1:
                break
        length = min(len(ncf_expand(q, p)) if p else 1, len(ncf_expand(q, q - p)) if p else 1)
        t_todd, v_todd = _timed(lambda: ded.dedekind_via_todd(i, j, p, q), repeat)
        t_direct, v_direct = _timed(lambda: ded.dedekind_direct_fast(i, j, p, q), 1)
        out.append(
            {
                "q": q,
                "p": p,
                "cf_length": length,
                "t_direct": t_direct,
                "t_via_todd": t_todd,
                "ratio": t_direct / t_todd if t_todd > 0 else float("inf"),
                "agree": v_todd == v_direct,
            }
        )
    return out


def cmd_bench(cfg: RunConfig) -> Outcome:
    prm = cfg.params
    qs = [int(v) for v in prm.get("q", [10**3, 10**4, 10**5, 10**6])]
    if any(q < 1 for q in qs):
        raise UsageError("bench sizes must be positive")
    recs = bench_rows(qs, int(prm.get("seed", 0)), int(prm.get("repeat", 3)))
    rows = [
        [str(r["q"]), str(r["p"]), str(r["cf_length"]), f"{r['t_direct']:.6f}", f"{r['t_via_todd']:.6f}", f"{r['ratio']:.1f}", str(r["agree"])]
        for r in recs
    ]
    bad = [r for r in recs if not r["agree"]]
    return Outcome(
        recs,
        rows,
        ["q", "p", "cf_length", "t_direct", "t_via_todd", "ratio", "agree"],
        ok=not bad,
        witness=None if not bad else f"direct and Todd routes disagree at (p, q) = ({bad[0]['p']}, {bad[0]['q']})",
    )


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "todd": cmd_todd,
    "dedekind": cmd_dedekind,
    "zeta": cmd_zeta,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


# --- rendering ---------------------------------------------------------------


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package: output, runconfig, or a subcommand name."""
    from importlib import resources

    return json.loads(resources.files("toriczeta").joinpath("schemas", f"{name}.json").read_text("utf-8"))


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def render(cfg: RunConfig, out: Outcome) -> str:
    if cfg.format == "json":
        return json.dumps({"config": cfg.to_json(), "result": out.result, "ok": out.ok}, sort_keys=True, indent=2)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.headers)
        w.writerows(out.table)
        return buf.getvalue().rstrip("\n")
    return out.text if out.text is not None else _render_table(out.headers, out.table)


# --- argument parsing ----------------------------------------------------------


def _default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")

    ap = argparse.ArgumentParser(prog="toriczeta", description="Todd series, Dedekind sums and quadratic zeta values.")
    ap.add_argument("--config", help="replay a serialized RunConfig (JSON)")
    sub = ap.add_subparsers(dest="subcommand")

    t = sub.add_parser("todd", parents=[common], help="Todd series of the cone <(1,0),(p,q)>")
    t.add_argument("-p", type=int, required=True)
    t.add_argument("-q", type=int, required=True)
    t.add_argument("-d", "--degree", type=int, required=True)
    t.add_argument("--method", choices=("cf", "ppd", "nonsingular", "cyclotomic", "all"), default="cf")

    d = sub.add_parser("dedekind", parents=[common], help="generalized Dedekind sum s_{i,j}(p,q)")
    d.add_argument("-i", type=int, required=True)
    d.add_argument("-j", type=int, required=True)
    d.add_argument("-p", type=int, required=True)
    d.add_argument("-q", type=int, required=True)
    d.add_argument("--method", choices=("direct", "todd", "both"), default="direct")

    z = sub.add_parser("zeta", parents=[common], help="zeta_{Q_b,tau_b}(-n)")
    z.add_argument("-b", required=True, help="comma-separated period, e.g. 2,3")
    z.add_argument("-n", type=int, default=0)
    z.add_argument("--nmax", type=int, default=None, help="report all n = 0..nmax")
    z.add_argument("--routes", default="field", help="comma list from field,general,zero,numeric")

    v = sub.add_parser("verify", parents=[common], help="run identity suites")
    v.add_argument("--suite", default="all", choices=(*SUITES, "all"))
    v.add_argument("--qmax", type=int, default=30)
    v.add_argument("--degree", type=int, default=8)
    v.add_argument("--nmax", type=int, default=2)
    v.add_argument("--rmax", type=int, default=3)
    v.add_argument("--bmax", type=int, default=5)

    bn = sub.add_parser("bench", parents=[common], help="time direct vs continued-fraction Dedekind sums")
    bn.add_argument("--q", default="1000,10000,100000,1000000", help="comma-separated sizes")
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--repeat", type=int, default=3)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "config", "format", "jobs")}
    if ns.subcommand == "zeta":
        params["b"] = _int_list(params["b"])
        params["routes"] = [r.strip() for r in params["routes"].split(",") if r.strip()]
    if ns.subcommand == "bench":
        params["q"] = _int_list(params["q"])
    if ns.subcommand == "todd":
        params["degree"] = params.pop("degree")
    jobs = ns.jobs if ns.jobs is not None else _default_jobs()
    return RunConfig(ns.subcommand, params, ns.format, max(1, jobs))


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        out = HANDLERS[cfg.subcommand](cfg)
    except (UsageError, KeyError, ValueError) as exc:
        msg = f"missing parameter {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"error: {msg}", file=stderr)
        return EXIT_USAGE
    print(render(cfg, out), file=stdout)
    if not out.ok:
        print(f"FAILED: {out.witness}", file=stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if ns.config:
            with open(ns.config, encoding="utf-8") as fh:
                cfg = RunConfig.from_json(json.load(fh))
        elif ns.subcommand is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        else:
            cfg = config_from_args(ns)
    except (OSError, json.JSONDecodeError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
