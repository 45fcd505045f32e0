"""Command-line front end: ``qgraph <subcommand> ...``.

Exit status is 0 on success, 2 for invalid input, 3 when a method refuses
the graph's regularity class (or another stated precondition), and 4 when
a resource cap would be exceeded.  Parallel sections honour ``QG_THREADS``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .charpoly import RegularityClass, classify, expand_determinant, extract_model
from .config import DEFAULT, Tolerances
from .errors import (ClassRefusal, InvalidGraphError, PreconditionError, QGraphError,
                     SizeCapError)
from .graph import Graph, load_graph, validate
from .oracle import average_staircase, convergence_study, find_roots, staircase
from .orbits import census, enumerate_primes, repetitions
from .scattering import S_of_k, assemble
from .spectra import compute_spectrum, determine_mu, separator

EXIT_OK, EXIT_ERROR, EXIT_INVALID, EXIT_REFUSED, EXIT_CAP = 0, 1, 2, 3, 4


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QG_THREADS", "1")))
    except ValueError:
        return 1


def _num(x):
    """Full-precision text for CSV cells; blanks for missing values."""
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


class Emitter:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def table(self, header, rows, meta=None):
        rows = list(rows)
        if self.fmt == "csv":
            w = csv.writer(self.out, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_num(x) for x in r])
        else:
            doc = {"version": __version__, **(meta or {}),
                   "rows": [dict(zip(header, (_plain(x) for x in r))) for r in rows]}
            self.out.write(json.dumps(doc, indent=2) + "\n")

    def record(self, doc: dict):
        if self.fmt == "csv":
            w = csv.writer(self.out, lineterminator="\n")
            flat = {k: v for k, v in doc.items() if not isinstance(v, (list, dict))}
            w.writerow(list(flat))
            w.writerow([_num(v) for v in flat.values()])
        else:
            self.out.write(json.dumps({"version": __version__, **doc}, indent=2) + "\n")


def _plain(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


def _tolerances(args) -> Tolerances:
    if not args.tol_file:
        return DEFAULT
    try:
        return Tolerances.from_file(args.tol_file)
    except (OSError, ValueError, TypeError) as exc:
        raise InvalidGraphError([f"bad tolerance file {args.tol_file}: {exc}"]) from exc


def _load(args) -> Graph:
    try:
        return load_graph(args.graph)
    except InvalidGraphError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidGraphError([f"cannot read {args.graph}: {exc}"]) from exc


def _asm(args):
    return assemble(_load(args), _tolerances(args))


def _model(args, need_mu=False):
    asm = _asm(args)
    model = extract_model(expand_determinant(asm), asm)
    if need_mu:
        check = model.regularity is not RegularityClass.IRREGULAR
        model = model.with_mu(determine_mu(model, check=check))
    return asm, model


# -- subcommands -------------------------------------------------------------

def cmd_validate(args, em: Emitter) -> int:
    g = _load(args)
    rep = validate(g)
    em.record({"ok": rep.ok, "n_vertices": g.n_vertices, "n_bonds": g.n_bonds,
               "problems": list(rep.problems)})
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_charpoly(args, em: Emitter) -> int:
    asm = _asm(args)
    tp = expand_determinant(asm)
    if em.fmt == "csv":
        em.table(["frequency", "re", "im"],
                 [(t.frequency, t.coefficient.real, t.coefficient.imag) for t in tp.terms])
        return EXIT_OK
    model = extract_model(tp, asm)
    em.record({"n_subsets": tp.n_subsets,
               "terms": [{"frequency": t.frequency, "re": t.coefficient.real,
                          "im": t.coefficient.imag,
                          "exponents": [list(v) for v in t.provenance]} for t in tp.terms],
               "model": model.to_json()})
    return EXIT_OK


def cmd_classify(args, em: Emitter) -> int:
    _, model = _model(args)
    doc = classify(model).to_json()
    doc.update(S0=model.S0, gamma0=model.gamma0)
    if em.fmt == "json":
        doc["terms"] = model.to_json()["terms"]
    em.record(doc)
    return EXIT_OK


def cmd_orbits(args, em: Emitter) -> int:
    asm = _asm(args)
    orbits = repetitions(enumerate_primes(asm, args.lmax), args.lmax)
    em.table(["code", "length", "S_p0", "re_A", "im_A", "prime"],
             [(" ".join(asm.bonds[i].label for i in o.code), o.length, o.S_p0,
               o.weight.real, o.weight.imag, int(o.prime)) for o in orbits],
             meta={"l_max": args.lmax})
    return EXIT_OK


def cmd_entropy(args, em: Emitter) -> int:
    c = census(_asm(args), args.lmax)
    em.record({"l_max": c.l_max, "entropy": c.entropy, "entropy_naive": c.entropy_naive,
               "benchmark": c.entropy_benchmark, "spectral_radius": c.spectral_radius,
               "period": c.period, "prime_counts": list(c.primes)})
    return EXIT_OK


def cmd_spectrum(args, em: Emitter) -> int:
    asm, model = _model(args, need_mu=True)
    res = compute_spectrum(model, asm, args.n_max, L=args.lmax, method=args.method,
                           workers=_threads())
    em.table(["n", "khat_lo", "khat_hi", "k_explicit", "k_implicit", "k_oracle",
              "rel_err_explicit", "flags"],
             [(r.n, r.khat_lo, r.khat_hi, r.k_explicit, r.k_implicit, r.k_oracle,
               r.rel_err_explicit, ";".join(r.flags)) for r in res.levels],
             meta={"mu": res.model.mu, "L": res.L, "nu_policy": res.nu_policy})
    return EXIT_OK


def cmd_oracle(args, em: Emitter) -> int:
    asm, model = _model(args)
    source = asm if args.direct else model
    scan = find_roots(source, args.kmax, method=args.method)
    em.table(["k", "residual", "multiplicity"],
             zip(scan.roots, scan.residuals, scan.multiplicity.tolist()),
             meta={"method": scan.method, "heuristic": scan.heuristic})
    return EXIT_OK


def staircase_rows(model, k_max: float, step: float | None = None):
    """(k, N, Nbar) samples on a regular grid up to ``k_max``."""
    step = step or math.pi / model.S0 / 20
    scan = find_roots(model, k_max + step, method="dense-scan"
                      if model.regularity is RegularityClass.IRREGULAR else "auto")
    ks = np.arange(0.0, k_max + 0.5 * step, step)
    return list(zip(ks, staircase(scan, ks).tolist(), average_staircase(model, ks)))


def cmd_staircase(args, em: Emitter) -> int:
    _, model = _model(args, need_mu=True)
    em.table(["k", "N", "Nbar"], staircase_rows(model, args.kmax, args.step),
             meta={"mu": model.mu})
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def cmd_converge(args, em: Emitter) -> int:
    asm, model = _model(args, need_mu=True)
    if model.regularity is RegularityClass.IRREGULAR:
        raise ClassRefusal("convergence study needs a regular or marginal graph")
    Ls = _int_list(args.L) if args.L else list(range(10, args.lmax + 1, 10))
    rows = convergence_study(model, asm, _int_list(args.n), Ls)
    em.table(["n", "L", "eps"], [(n, L, eps) for n, L, _, _, eps in rows])
    return EXIT_OK


def regmap_rows(family: str, grid: int, tol: Tolerances = DEFAULT, workers: int = 1):
    """Classification of every point of a ``grid x grid`` family scan."""
    if family not in catalog.FAMILIES:
        raise InvalidGraphError([f"unknown family {family!r}"])
    _, px, py, (lo, hi) = catalog.FAMILIES[family]
    axis = np.linspace(lo, hi, grid)

    def point(xy):
        x, y = xy
        asm = assemble(catalog.family_graph(family, float(x), float(y)), tol)
        m = extract_model(expand_determinant(asm), asm)
        return (float(x), float(y), m.alpha, m.regularity.value)

    pts = [(x, y) for x in axis for y in axis]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return px, py, list(pool.map(point, pts))
    return px, py, [point(p) for p in pts]


def cmd_regmap(args, em: Emitter) -> int:
    px, py, rows = regmap_rows(args.family, args.grid, _tolerances(args), _threads())
    em.table([px, py, "alpha", "class"], rows, meta={"family": args.family})
    return EXIT_OK


_ALIASES = {"lambda": "lam"}


def _example_params(extra: list[str]) -> dict[str, float]:
    params, key = {}, None
    for tok in extra:
        if tok.startswith("--"):
            if key is not None:
                raise InvalidGraphError([f"missing value for --{key}"])
            key = tok[2:]
            if "=" in key:
                key, val = key.split("=", 1)
                params[_ALIASES.get(key, key).replace("-", "_")] = float(val)
                key = None
        elif key is not None:
            params[_ALIASES.get(key, key).replace("-", "_")] = float(tok)
            key = None
        else:
            raise InvalidGraphError([f"unexpected argument {tok!r}"])
    if key is not None:
        raise InvalidGraphError([f"missing value for --{key}"])
    return params


def write_figures(directory, tol: Tolerances = DEFAULT, workers: int = 1) -> list[Path]:
    """Emit the figure tables (fig3, fig5, fig6b, fig7a, fig7b) as CSV files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []

    def dump(name, header, rows):
        buf = io.StringIO()
        Emitter("csv", buf).table(header, rows)
        path = directory / name
        path.write_text(buf.getvalue())
        written.append(path)

    def model_of(g):
        asm = assemble(g, tol)
        m = extract_model(expand_determinant(asm), asm)
        check = m.regularity is not RegularityClass.IRREGULAR
        return asm, m.with_mu(determine_mu(m, check=check))

    asm, m = model_of(catalog.step_in_box(b=0.3, lam=0.5))
    dump("fig3.csv", ["k", "N", "Nbar"], staircase_rows(m, float(separator(m, 30))))
    rows = convergence_study(m, asm, [1, 10, 100], list(range(10, 151, 10)))
    dump("fig5.csv", ["n", "L", "eps"], [(n, L, e) for n, L, _, _, e in rows])
    px, py, grid = regmap_rows("four-vertex-chain", 101, tol, workers)
    dump("fig6b.csv", [px, py, "alpha", "class"], grid)
    for name, (r2, r3) in (("fig7a.csv", (0.2, 0.3)), ("fig7b.csv", (0.98, 0.99))):
        _, m = model_of(catalog.four_vertex_chain(r2, r3))
        dump(name, ["k", "N", "Nbar"], staircase_rows(m, float(separator(m, 30))))
    return written


def cmd_examples(args, em: Emitter, extra: list[str]) -> int:
    if args.figures:
        for p in write_figures(args.figures, _tolerances(args), _threads()):
            print(p, file=sys.stderr)
        return EXIT_OK
    if args.name is None:
        em.table(["name", "parameters", "summary"],
                 [(e.name, " ".join(f"{k}={v}" for k, v in e.parameters().items()), e.summary)
                  for e in catalog.REGISTRY.values()])
        return EXIT_OK
    try:
        ex = catalog.get(args.name)
    except KeyError as exc:
        raise InvalidGraphError([str(exc.args[0])]) from None
    params = _example_params(extra)
    unknown = set(params) - set(ex.parameters())
    if unknown:
        raise InvalidGraphError([f"{args.name} has no parameter(s) {sorted(unknown)}"])
    if ex.name == "manhattan" and "n_steps" in params:
        params["n_steps"] = int(params["n_steps"])
    obj = ex.build(**params)
    sys.stdout.write(json.dumps(obj.to_json(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_dump_smatrix(args, em: Emitter) -> int:
    asm = _asm(args)
    M = asm.T if args.k is None else S_of_k(asm, args.k)
    labels = [b.label for b in asm.bonds]
    em.table(["row", "col", "re", "im"],
             [(labels[i], labels[j], M[i, j].real, M[i, j].imag)
              for i in range(asm.dim) for j in range(asm.dim)],
             meta={"k": args.k, "S0": asm.S0, "gamma0": asm.gamma0})
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default depends on the subcommand)")
    common.add_argument("--tol-file", default=None, help="JSON file overriding tolerances")

    p = argparse.ArgumentParser(prog="qgraph", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qgraph {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, fmt, help_, graph=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if graph:
            sp.add_argument("graph", help="graph or piecewise-potential JSON file")
        sp.set_defaults(func=func, default_format=fmt)
        return sp

    add("validate", cmd_validate, "json", "check graph invariants")
    add("charpoly", cmd_charpoly, "json", "expand det[1 - S(k)] and extract the cosine form")
    add("classify", cmd_classify, "json", "regular / marginal / irregular")
    sp = add("orbits", cmd_orbits, "csv", "list periodic orbits")
    sp.add_argument("--lmax", type=int, required=True)
    sp = add("entropy", cmd_entropy, "json", "topological entropy from orbit counts")
    sp.add_argument("--lmax", type=int, default=16)
    sp = add("spectrum", cmd_spectrum, "csv", "per-level eigenvalue table")
    sp.add_argument("--n-max", type=int, default=100)
    sp.add_argument("--lmax", type=int, default=150)
    sp.add_argument("--method", choices=("explicit", "implicit", "oracle", "all"),
                    default="all")
    sp = add("oracle", cmd_oracle, "csv", "numerical roots of the spectral equation")
    sp.add_argument("--kmax", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "frame-bisection", "dense-scan"),
                    default="auto")
    sp.add_argument("--direct", action="store_true",
                    help="scan det[1 - S(k)] directly instead of the cosine form")
    sp = add("staircase", cmd_staircase, "csv", "N(k) and its piercing average")
    sp.add_argument("--kmax", type=float, required=True)
    sp.add_argument("--step", type=float, default=None)
    sp = add("converge", cmd_converge, "csv", "explicit-formula error versus truncation")
    sp.add_argument("--n", default="1,10,100")
    sp.add_argument("--lmax", type=int, default=150)
    sp.add_argument("--L", default=None, help="explicit comma-separated truncations")
    sp = add("regmap", cmd_regmap, "csv", "classify a two-parameter family", graph=False)
    sp.add_argument("--family", required=True)
    sp.add_argument("--grid", type=int, default=101)
    sp = add("examples", cmd_examples, "csv", "list, build or tabulate examples", graph=False)
    sp.add_argument("--name", default=None)
    sp.add_argument("--figures", default=None, metavar="DIR")
    sp = add("dump-smatrix", cmd_dump_smatrix, "csv", "bond scattering matrix T or S(k)")
    sp.add_argument("--k", type=float, default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "examples":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    em = Emitter(args.format or args.default_format)
    try:
        if args.command == "examples":
            return cmd_examples(args, em, extra)
        return args.func(args, em)
    except InvalidGraphError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ClassRefusal, PreconditionError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except SizeCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except QGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
