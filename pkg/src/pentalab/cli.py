"""Command line front end: ``pentalab verify|factor|demo|cartan|tau|dims``.

All output is JSON lines unless ``--pretty`` is given.  Exit codes: 0 on
success, 1 on an identity failure (or a non-factorizable input to
``factor``), 2 on a configuration error, 3 when sampling is exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .almost import THETA, AlmostGroup
from .errors import (
    DomainError,
    NotFactorizable,
    PentalabError,
    SamplingExhausted,
    ThetaNotUnipotent,
)
from .factor import Theta, factor
from .groups import Block2NModel, GroupElement, GroupModel, SL3SModel, Tri2Model
from .linalg import parse_rational
from .maps import FactorizedSolution, j_closed, k_closed, rho_closed, star_closed_tri2
from .rootdata import DynkinType, cartan_matrix, h_decomposition_dims, tau
from .serialize import (
    almost_to_json,
    element_from_json,
    element_to_json,
    factorization_to_json,
    matrix_from_json,
    matrix_to_json,
)
from .suites import SUITES, Config, acceptance_configs, run_verify

EXIT_OK, EXIT_FAILURE, EXIT_CONFIG, EXIT_EXHAUSTED = 0, 1, 2, 3

THETA_KEYS = {"tri2": ("b", "c"), "sl3s": ("a", "b"), "block2n": ("b", "c")}


class ConfigError(Exception):
    pass


def _emit(obj, out) -> None:
    out.write(json.dumps(obj) + "\n")


# -- configuration parsing ----------------------------------------------

def parse_theta_spec(text: str, kind: str) -> dict:
    """``"b=2,c=1/2"`` -> ``{"b": Fraction(2), "c": Fraction(1, 2)}``."""
    params = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in THETA_KEYS[kind]:
            raise ConfigError(f"bad theta parameter {part!r} for {kind}")
        if key in params:
            raise ConfigError(f"theta parameter {key!r} given twice")
        try:
            params[key] = parse_rational(value.strip())
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return params


def build_model(kind: str, n: int | None, s: str | None, bound: int) -> GroupModel:
    if kind == "tri2":
        return Tri2Model(sample_bound=bound)
    if kind == "sl3s":
        if s is None:
            return SL3SModel(sample_bound=bound)
        try:
            triple = tuple(parse_rational(v.strip()) for v in s.split(","))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return SL3SModel(s=triple, sample_bound=bound)
    return Block2NModel(n=1 if n is None else n, sample_bound=bound)


def build_theta(model: GroupModel, spec: str | None) -> Theta:
    params = parse_theta_spec(spec, model.kind) if spec else {}
    if isinstance(model, Tri2Model):
        return Theta.tri2(model, params.get("b", 1), params.get("c", 1))
    if isinstance(model, SL3SModel):
        return Theta.sl3s(model, params.get("a", 1), params.get("b", 1))
    return Theta.block2n(model, params.get("b", 1), params.get("c"))


def _with_bound(config: Config, bound: int) -> Config:
    model = config.model
    if isinstance(model, Tri2Model):
        m = Tri2Model(sample_bound=bound)
    elif isinstance(model, SL3SModel):
        m = SL3SModel(s=model.s, sample_bound=bound)
    else:
        m = Block2NModel(n=model.n, sample_bound=bound)
    return Config(m, Theta(m, config.theta.matrix, config.theta.params))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PENTALAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"PENTALAB_SEED is not an integer: {env!r}") from None


# -- verify --------------------------------------------------------------

def _render_table(lines: list[dict]) -> str:
    head = ("suite", "check", "model", "theta", "samples", "passed", "failed", "rejected")
    rows = [head]
    for r in lines:
        if r.get("summary"):
            continue
        theta = ",".join(f"{k}={v}" for k, v in r["theta"].items()
                         if k in ("a", "b", "c") and not isinstance(v, dict))
        model = r["model"]["model"] + (f"(n={r['model']['n']})" if "n" in r["model"] else "")
        if "skipped" in r:
            rows.append((r["suite"], r["check"], model, theta, "-", "-", "-", "skipped"))
        else:
            rows.append((r["suite"], r["check"], model, theta, str(r["samples"]),
                         str(r["passed"]), str(r["failed"]), str(r["rejected"])))
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    text = "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)
    s = lines[-1]
    return (text + f"\n\nchecks {s['checks']}  skipped {s['skipped']}  passed {s['passed']}"
            f"  rejected {s['rejected']}  identity failures {s['identity_failures']}"
            f"  route failures {s['route_failures']}\n")


def cmd_verify(args, out) -> int:
    if args.samples < 1:
        raise ConfigError("--samples must be >= 1")
    if args.bound < 2:
        raise ConfigError("--bound must be >= 2")
    if args.shards < 1:
        raise ConfigError("--shards must be >= 1")
    if args.model is None:
        if args.theta or args.n is not None or args.s is not None:
            raise ConfigError("--theta, --n and --s need --model")
        configs = [_with_bound(c, args.bound) for c in acceptance_configs()]
    else:
        if args.n is not None and args.model != "block2n":
            raise ConfigError("--n applies to block2n only")
        if args.s is not None and args.model != "sl3s":
            raise ConfigError("--s applies to sl3s only")
        model = build_model(args.model, args.n, args.s, args.bound)
        configs = [Config(model, build_theta(model, args.theta))]
    lines, code = run_verify(configs, args.suite, args.samples, _seed(args), args.shards)
    if args.pretty:
        out.write(_render_table(lines))
    else:
        for line in lines:
            _emit(line, out)
    return code


# -- factor --------------------------------------------------------------

def _read_input(source: str) -> object:
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"input is not JSON: {exc}") from None


def cmd_factor(args, out) -> int:
    obj = _read_input(args.input)
    if isinstance(obj, dict) and "model" in obj:
        x = element_from_json(obj)
        model, g = x.model, x.to_matrix()
    else:
        g = matrix_from_json(obj)
        kind = args.model or ("sl3s" if g.rows == 3 else "block2n")
        n = args.n if args.n is not None else max(g.rows // 2, 1)
        model = build_model(kind, n, args.s, 10)
        if g.shape != (model.ambient_size, model.ambient_size):
            raise ConfigError(f"{kind} needs a {model.ambient_size}x{model.ambient_size} matrix")
    try:
        f = factor(g, model)
    except NotFactorizable as exc:
        sys.stderr.write(f"NotFactorizable: {exc}\n")
        return EXIT_FAILURE
    ok = f.reassemble_left() == g and f.reassemble_right() == g
    result = factorization_to_json(f, ok)
    out.write(json.dumps(result, indent=2 if args.pretty else None) + "\n")
    return EXIT_OK if ok else EXIT_FAILURE


# -- demo ----------------------------------------------------------------

def _route_line(example, theta, name, args, route, closed) -> dict:
    enc = lambda v: element_to_json(v) if isinstance(v, GroupElement) else v
    return {
        "example": example,
        "theta": theta,
        "map": name,
        "input": [element_to_json(a) for a in args],
        "factorization_route": enc(route),
        "closed_form": enc(closed),
        "agree": route == closed,
    }


def _demo_points(model: GroupModel, fixed: list, sol: FactorizedSolution, tag: str) -> list:
    rng = random.Random(f"demo:{tag}")
    return [model.element(c) for c in fixed] + [sol.sample(rng) for _ in range(2)]


def _demo_solution(example, model, theta, points, out, star_closed=None):
    sol = FactorizedSolution.of(model, theta)
    tj = {k: str(v) for k, v in theta.params.items()}

    def line(name, args, route, closed):
        try:
            _emit(_route_line(example, tj, name, args, route(), closed()), out)
        except DomainError as exc:
            _emit({"example": example, "theta": tj, "map": name,
                   "input": [element_to_json(a) for a in args], "domain_error": str(exc)}, out)

    for x in points:
        line("rho", [x], lambda: sol.rho(x), lambda: rho_closed(model, theta, x))
        if theta.unipotent:
            line("j", [x], lambda: sol.j(x), lambda: j_closed(model, theta, x))
            line("k", [x], lambda: sol.k(x), lambda: k_closed(model, theta, x))
    for x, y in zip(points, points[1:]):
        line("star", [x, y], lambda: sol.star(x, y),
             lambda: rho_closed(model, theta, x) * rho_closed(model, theta, x * y).inv())
        if star_closed is not None:
            line("star_example", [x, y], lambda: sol.star(x, y), lambda: star_closed(x, y))


def cmd_demo(args, out) -> int:
    if args.example == "gl2":
        model = Tri2Model()
        sol = FactorizedSolution.of(model)
        points = _demo_points(model, [(2, 3), (5, 7)], sol, "gl2")
        _demo_solution("gl2", model, Theta.tri2(model, -1, 1), points, out, star_closed_tri2)
        _demo_solution("gl2", model, Theta.tri2(model, 1, 1), points, out)
        _demo_solution("gl2", model, Theta.tri2(model, 2, "1/2"), points, out)
    elif args.example == "sl3":
        model = SL3SModel()
        x = model.element((2, 1, 1, 1))
        _emit({"example": "sl3", "map": "i", "input": [element_to_json(x)],
               "value": element_to_json(x.inv())}, out)
        sol = FactorizedSolution.of(model)
        points = _demo_points(model, [(2, 1, 3, 1), (2, 1, 1, 1)], sol, "sl3")
        _demo_solution("sl3", model, Theta.sl3s(model, 1, 1), points, out)
        _demo_solution("sl3", model, Theta.sl3s(model, 2, 3), points, out)
    else:
        model = Tri2Model()
        ag = AlmostGroup(FactorizedSolution.of(model))
        enc = almost_to_json
        _emit({"example": "almost", "product": "THETA*THETA", "value": enc(ag.mul(THETA, THETA))}, out)
        x1, x2 = model.element((2, 3)), model.element((5, 7))
        p = ag.pair(x1, x2)
        _emit({"example": "almost", "product": "THETA*p", "p": enc(p), "value": enc(ag.mul(THETA, p))}, out)
        _emit({"example": "almost", "product": "p*THETA", "p": enc(p), "value": enc(ag.mul(p, THETA))}, out)
        q = ag.pair(x2, x1)
        pq = ag.mul(p, q)
        _emit({"example": "almost", "product": "p*q", "p": enc(p), "q": enc(q), "value": enc(pq),
               "realization_agrees": ag.realize(pq) == ag.realize(p) @ ag.realize(q)}, out)
        _emit({"example": "almost", "inverse": enc(p), "value": enc(ag.inv(p)),
               "p_times_inverse": enc(ag.mul(p, ag.inv(p)))}, out)
    return EXIT_OK


# -- root data -----------------------------------------------------------

def _dynkin(args) -> DynkinType:
    return DynkinType(args.type, args.rank)


def cmd_cartan(args, out) -> int:
    t = _dynkin(args)
    m = cartan_matrix(t)
    if args.pretty:
        out.write("\n".join(" ".join(f"{v!s:>2}" for v in m.row(i)) for i in range(m.rows)) + "\n")
    else:
        _emit({"type": str(t), "cartan": matrix_to_json(m)}, out)
    return EXIT_OK


def cmd_tau(args, out) -> int:
    t = _dynkin(args)
    if args.index is not None:
        _emit({"type": str(t), "index": args.index, "tau": tau(t, args.index)}, out)
    else:
        _emit({"type": str(t), "tau": [tau(t, i) for i in range(1, t.rank + 1)]}, out)
    return EXIT_OK


def cmd_dims(args, out) -> int:
    t = _dynkin(args)
    h0, h1 = h_decomposition_dims(t)
    _emit({"type": str(t), "dim_h0": h0, "dim_h_prime": h1, "dim_h_double_prime": h1}, out)
    return EXIT_OK


# -- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pentalab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def model_flags(sp, with_theta=True):
        sp.add_argument("--model", choices=("tri2", "sl3s", "block2n"))
        sp.add_argument("--n", type=int, help="block size N for block2n")
        sp.add_argument("--s", help='exponent triple for sl3s, e.g. "0,-1,1"')
        if with_theta:
            sp.add_argument("--theta", help='"b=..,c=.." (tri2, block2n) or "a=..,b=.." (sl3s)')
        sp.add_argument("--pretty", action="store_true")

    v = sub.add_parser("verify", help="run verification suites")
    model_flags(v)
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int)
    v.add_argument("--bound", type=int, default=10)
    v.add_argument("--shards", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("factor", help="factorize an element or matrix given as JSON")
    f.add_argument("input", help="JSON text, a file path, or - for stdin")
    model_flags(f)
    f.set_defaults(func=cmd_factor)

    d = sub.add_parser("demo", help="evaluate worked examples by two routes")
    d.add_argument("example", choices=("gl2", "sl3", "almost"))
    d.set_defaults(func=cmd_demo)

    for name, func, doc in (
        ("cartan", cmd_cartan, "Cartan matrix"),
        ("tau", cmd_tau, "diagram involution"),
        ("dims", cmd_dims, "Cartan subalgebra split dimensions"),
    ):
        r = sub.add_parser(name, help=doc)
        r.add_argument("--type", required=True, help="family letter A-G")
        r.add_argument("--rank", type=int, required=True)
        if name == "tau":
            r.add_argument("--index", type=int)
        r.add_argument("--pretty", action="store_true")
        r.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except SamplingExhausted as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_EXHAUSTED
    except ThetaNotUnipotent as exc:
        sys.stderr.write(f"ThetaNotUnipotent: {exc}\n")
        return EXIT_CONFIG
    except (ConfigError, PentalabError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
