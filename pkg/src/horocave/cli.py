"""Command-line entry point.

Exit codes: 0 on success, 1 when a computation or check fails, 2 on a
configuration error.  Output is one JSON object per line on standard output.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from .catalog import CATALOG_NAMES, catalog_field
from .conformal import dilate, gauss_curvature_2d, scalar_curvature, schouten
from .errors import CatalogError, HorocaveError
from .immersion import immerse, parallel_flow
from .mesh import build_mesh, write_obj
from .probe import equidistant_family, first_contact, horosphere_family, umbilic_family, umbilic_radius
from .sphere import north, sample_domain
from .verify import SUITES, format_record, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    """Bad flags, config file, environment or field parameters."""


# ---------------------------------------------------------------------------
# configuration

def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = open(path).read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{i}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def parse_params(items):
    """``["k=v", ...]`` to a dict; comma lists become vectors."""
    out = {}
    for it in items:
        if "=" not in it:
            raise ConfigError(f"--param expects k=v, got {it!r}")
        k, v = (s.strip() for s in it.split("=", 1))
        if "," in v:
            try:
                v = np.array([float(c) for c in v.split(",")])
            except ValueError:
                raise ConfigError(f"bad vector for parameter {k!r}: {v!r}") from None
        out[k] = v
    return out


def thread_count(env=None):
    env = os.environ if env is None else env
    raw = env.get("HOROCAVE_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ConfigError(f"HOROCAVE_THREADS must be a positive integer, got {raw!r}")
    return n


@contextmanager
def worker_map(n):
    """A ``map`` that keeps input order, backed by at most ``n`` threads."""
    if n <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=n) as ex:
        yield ex.map


# ---------------------------------------------------------------------------
# parser

def _add_field_args(p):
    p.add_argument("--field", default="constant", help=f"catalog field: {', '.join(CATALOG_NAMES)}")
    p.add_argument("--param", action="append", default=None, metavar="K=V",
                   help="field parameter; repeatable; vectors as comma lists")
    p.add_argument("--dilate", type=float, default=0.0, help="dilate the field by t first")


def _add_point_args(p):
    p.add_argument("--point", action="append", default=None, metavar="X1,...",
                   help="sphere point as a comma list; repeatable")
    p.add_argument("--samples", type=int, default=8, help="random domain points when no --point")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="horocave", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value file; flags override it")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="Schouten eigenvalues and curvature at points")
    _add_field_args(p)
    _add_point_args(p)
    p.add_argument("--method", choices=("auto", "analytic", "fd"), default="auto")

    p = sub.add_parser("immerse", help="points of the associated hypersurface")
    _add_field_args(p)
    _add_point_args(p)
    p.add_argument("--model", choices=("hyperboloid", "poincare", "klein"), default="hyperboloid")

    p = sub.add_parser("flow", help="points of the parallel hypersurface at distance t")
    _add_field_args(p)
    _add_point_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--model", choices=("hyperboloid", "poincare", "klein"), default="hyperboloid")

    p = sub.add_parser("probe", help="first contact with a sweeping reference family")
    _add_field_args(p)
    p.add_argument("--family", choices=("horosphere", "equidistant", "umbilic"), required=True)
    p.add_argument("--direction", default=None, help="family axis as a comma list (default: north)")
    p.add_argument("--lambda0", type=float, default=0.25, help="umbilic family eigenvalue")
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("mesh", help="OBJ mesh of an m = 2 surface")
    _add_field_args(p)
    p.add_argument("--model", choices=("poincare", "klein"), default="poincare")
    p.add_argument("--out", required=True)
    p.add_argument("--resolution", default="32,64", help="n_theta,n_phi")
    p.add_argument("--allow-ideal", action="store_true")

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--inject-error", action="store_true", help="test hook: break one identity")
    return ap


_SUBCOMMANDS = ("eval", "immerse", "flow", "probe", "mesh", "verify")


def _subparser(ap, cmd):
    action = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    return action.choices[cmd]


def _apply_config(sub, cfg):
    """Install config values as defaults of ``sub`` so explicit flags still win."""
    acts = {a.dest: a for a in sub._actions if a.option_strings}
    lists = {}
    for k, v in cfg.items():
        act = acts.get(k)
        if act is None or k == "help":
            raise ConfigError(f"unknown config key {k!r} for '{sub.prog.split()[-1]}'")
        if isinstance(act, argparse._AppendAction):
            # repeatable flags take ';'-separated values in a config file
            lists[k] = [t.strip() for t in v.split(";") if t.strip()]
            continue
        if act.nargs == 0:
            v = v.lower() in ("1", "true", "yes", "on")
        else:
            try:
                v = act.type(v) if act.type else v
            except ValueError:
                raise ConfigError(f"config {k} = {v!r} is not valid") from None
            if act.choices is not None and v not in act.choices:
                raise ConfigError(f"config {k} = {v!r}; choose from {list(act.choices)}")
        act.default = v
        act.required = False
    return lists


def parse_args(argv):
    """Parse flags, merging an optional ``--config`` file underneath them."""
    ap = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return ap.parse_args(argv)
    cfg = read_config(known.config)
    cmd = next((a for a in rest if a in _SUBCOMMANDS), None)
    if cmd is None:
        return ap.parse_args(argv)
    lists = _apply_config(_subparser(ap, cmd), cfg)
    args = ap.parse_args(argv)
    for k, vals in lists.items():
        if k == "param":
            # later entries win, so command-line params override per key
            args.param = vals + (args.param or [])
        elif getattr(args, k) is None:
            setattr(args, k, vals)
    return args


# ---------------------------------------------------------------------------
# commands

def make_field(args):
    try:
        entry = catalog_field(args.field, **parse_params(args.param or []))
    except (CatalogError, ValueError) as e:
        raise ConfigError(str(e)) from None
    F = entry.field
    return dilate(F, args.dilate) if args.dilate else F


def points(args, F):
    if args.point:
        try:
            P = np.array([[float(c) for c in s.split(",")] for s in args.point])
        except ValueError:
            raise ConfigError("--point expects a comma list of numbers") from None
        if P.shape[1] != F.m + 1:
            raise ConfigError(f"points need {F.m + 1} coordinates for this field")
        return P / np.linalg.norm(P, axis=1, keepdims=True)
    return sample_domain(F.domain, args.samples, args.seed, margin=0.05)


def _emit(obj, out):
    out.write(json.dumps(obj) + "\n")


def _eval_one(F, x, method):
    S = schouten(F, x, method)
    rec = {"point": x.tolist(), "sigma": S.sigma, "rho": S.rho, "lambda": S.lam.tolist()}
    if F.m == 2:
        rec["K"] = gauss_curvature_2d(F, x, method)
    else:
        rec["R"] = scalar_curvature(F, x, method=method)
    return rec


def cmd_eval(args, mapper, out):
    F = make_field(args)
    for rec in mapper(lambda x: _eval_one(F, x, args.method), list(points(args, F))):
        _emit({"field": F.name, **rec}, out)
    return EXIT_OK


def _immerse_record(s, model):
    rec = {"point": s.x.tolist(), "model": model, "coords": s.model_point.coords.tolist()
           if s.model_point is not None else s.phi.coords.tolist(),
           "kappa": np.asarray(s.kappa).tolist(), "lambda": np.asarray(s.lam).tolist()}
    return rec


def cmd_immerse(args, mapper, out):
    F = make_field(args)
    model = args.model
    f = lambda x: _immerse_record(immerse(F, x, model), model)
    for rec in mapper(f, list(points(args, F))):
        _emit({"field": F.name, **rec}, out)
    return EXIT_OK


def cmd_flow(args, mapper, out):
    F = make_field(args)
    model = args.model
    f = lambda x: _immerse_record(parallel_flow(F, args.t, x, model), model)
    for rec in mapper(f, list(points(args, F))):
        _emit({"field": F.name, "t": args.t, **rec}, out)
    return EXIT_OK


def cmd_probe(args, mapper, out):
    F = make_field(args)
    if args.direction:
        try:
            n = np.array([float(c) for c in args.direction.split(",")])
        except ValueError:
            raise ConfigError("--direction expects a comma list") from None
        if len(n) != F.m + 1:
            raise ConfigError(f"--direction needs {F.m + 1} coordinates")
        n = n / np.linalg.norm(n)
    else:
        n = north(F.m)
    if args.family == "horosphere":
        fam = horosphere_family(n)
    elif args.family == "equidistant":
        fam = equidistant_family(n)
    else:
        try:
            fam = umbilic_family(n, umbilic_radius(args.lambda0))
        except ValueError as e:
            raise ConfigError(str(e)) from None
    r = first_contact(F, fam, n_grid=args.grid, tol=args.tol, mapper=mapper)
    _emit({"field": F.name, "family": r.family, "s1": r.s1, "witness": r.witness.tolist(),
           "location": r.location, "touching": r.touching, "degenerate": r.degenerate,
           "iterations": r.iterations, "convention": fam.convention, "label": r.label}, out)
    return EXIT_OK


def cmd_mesh(args, mapper, out):
    F = make_field(args)
    try:
        res = tuple(int(v) for v in args.resolution.split(","))
    except ValueError:
        res = ()
    if len(res) != 2 or min(res) < 2:
        raise ConfigError("--resolution expects n_theta,n_phi with both >= 2")
    M = build_mesh(F, args.model, res, allow_ideal=args.allow_ideal)
    write_obj(M, args.out)
    norms = np.linalg.norm(M.vertices, axis=1)
    _emit({"field": F.name, "model": args.model, "out": args.out, "vertices": len(M.vertices),
           "faces": len(M.faces), "max_norm": float(norms.max()) if len(norms) else 0.0}, out)
    return EXIT_OK


def cmd_verify(args, mapper, out):
    recs = run_suite(args.suite, inject_error=args.inject_error, mapper=mapper)
    for r in recs:
        out.write(format_record(r) + "\n")
    return EXIT_OK if all(r["pass"] for r in recs) else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "immerse": cmd_immerse, "flow": cmd_flow, "probe": cmd_probe,
            "mesh": cmd_mesh, "verify": cmd_verify}


def main(argv=None, out=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG
    except ConfigError as e:
        print(f"horocave: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        n = thread_count()
        with worker_map(n) as mapper:
            return COMMANDS[args.command](args, mapper, out)
    except ConfigError as e:
        print(f"horocave: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (HorocaveError, OSError) as e:
        print(f"horocave: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL
