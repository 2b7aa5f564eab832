"""Command-line interface: ``zkstokes {gen,verify,theorem,homology,selftest}``.

Exit codes: 0 pass, 1 mathematical failure, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, homalg
from .errors import ZkError
from .labelling import Labelling, check_admissible, check_equivariant, random_labelling, tautological_labelling
from .resolutions import verify_f_chain_map
from .ring import RingSpec, Z
from .simplicial import (
    SimplicialChain,
    SimplicialComplex,
    alt_subcomplex,
    barycentric_subdivision,
    canonical_action,
    join_complex,
    pseudomanifold_analysis,
)
from .stokes import (
    GeneralizedSphere,
    alpha_invariance_experiment,
    alpha_sequence,
    build_ezk_sphere,
    build_kgon_sphere,
    dold_exhaustive,
    stokes_sides,
    subdivide_sphere,
    subdivision_tucker_check,
    verify_generalized_sphere,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(kind: str, inputs: dict, values: dict, ok: bool, certificate=None) -> dict:
    return {
        "format": 1,
        "theorem": kind,
        "inputs": inputs,
        "values": values,
        "verdict": "pass" if ok else "fail",
        "certificate": certificate or {},
    }


def _need(args, *names):
    attr = lambda n: "input" if n == "in" else n.replace("-", "_")
    missing = [n for n in names if getattr(args, attr(n)) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + n for n in missing))


def _load_complex(path: str):
    doc = _load(path)
    if "complex" in doc and "chains" in doc:
        doc = doc["complex"]
    return SimplicialComplex.from_json(doc)


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "join":
        _need(args, "k", "m")
        X, action = join_complex(args.k, args.m)
        doc = X.to_json(action)
    elif kind == "alt":
        _need(args, "k", "m", "d")
        X = alt_subcomplex(args.k, args.m, args.d)
        doc = X.to_json(canonical_action(args.k, X))
    elif kind == "kgon":
        _need(args, "k", "m")
        doc = build_kgon_sphere(args.k, args.m, args.ring).to_json()
    elif kind == "ezk-sphere":
        _need(args, "k", "d")
        doc = build_ezk_sphere(args.k, args.d, args.ring).to_json()
    elif kind == "subdivide":
        _need(args, "in")
        src = _load(args.input)
        if "chains" in src:
            doc = subdivide_sphere(GeneralizedSphere.from_json(src), args.rounds or 1).to_json()
        else:
            X, action = SimplicialComplex.from_json(src)
            for _ in range(args.rounds or 1):
                sub = barycentric_subdivision(X, action)
                X, action = sub.complex, sub.action
            doc = X.to_json(action)
    elif kind == "labelling":
        _need(args, "in", "k")
        X, action = _load_complex(args.input)
        if args.mode == "tautological":
            l = tautological_labelling(args.k, X)
        else:
            _need(args, "seed")
            colors = args.colors or X.dim + 2
            l = random_labelling(X, args.k, colors, args.mode, args.seed, action)
        doc = l.to_json()
    else:
        raise UsageError(f"unknown gen kind {kind}")
    _emit(doc, args.out)
    return EXIT_PASS


def cmd_verify(args) -> int:
    kind = args.kind
    if kind == "chainmap":
        _need(args, "k")
        rep = verify_f_chain_map(args.k, args.max_degree or 4, args.ring)
        ok = not rep["failures"]
        doc = _report("chainmap", {"k": args.k, "max_degree": args.max_degree or 4, "ring": str(args.ring)},
                      {"checked": rep["checked"]}, ok, {"failures": rep["failures"]})
    elif kind == "sphere":
        _need(args, "in")
        gs = GeneralizedSphere.from_json(_load(args.input))
        rep = verify_generalized_sphere(gs)
        ok = rep["ok"]
        doc = _report("sphere", {"in": args.input}, {"degrees": len(gs.chains)}, ok, rep)
    elif kind in ("admissible", "equivariant"):
        _need(args, "in", "labelling")
        X, action = _load_complex(args.input)
        l = Labelling.from_json(_load(args.labelling))
        if kind == "admissible":
            rep = check_admissible(X, l)
        else:
            if action is None:
                raise UsageError("the complex file carries no action")
            rep = check_equivariant(l, action)
        ok = rep.ok
        doc = _report(kind, {"in": args.input, "labelling": args.labelling}, {"violations": len(rep.violations)}, ok, rep.to_json())
    elif kind == "pm":
        _need(args, "in")
        X, _ = _load_complex(args.input)
        rep = pseudomanifold_analysis(X)
        ok = rep.is_pseudomanifold
        cert = {"orientation_chain": rep.orientation_chain.to_json() if rep.orientation_chain else None}
        doc = _report("pm", {"in": args.input}, rep.summary(), ok, cert)
    else:
        raise UsageError(f"unknown verify kind {kind}")
    _emit(doc, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def _seeds(args) -> list:
    n = args.seeds if args.seeds is not None else 10
    start = args.seed or 0
    return list(range(start, start + n))


def cmd_theorem(args) -> int:
    kind = args.kind
    if kind == "stokes":
        _need(args, "chain", "labelling")
        X = None
        if args.complex:
            X, _ = _load_complex(args.complex)
        x = SimplicialChain.from_json(_load(args.chain), X)
        l = Labelling.from_json(_load(args.labelling))
        rep = stokes_sides(x, l)
        doc = _report("stokes", {"chain": args.chain, "labelling": args.labelling}, rep.to_json(), rep.equal)
        ok = rep.equal
    elif kind == "tucker":
        _need(args, "k", "d")
        seeds = _seeds(args)
        if args.rounds:
            rep = subdivision_tucker_check(args.k, args.d, args.rounds, seeds, args.colors)
            ok = rep["ok"]
            values = {"counts": [r["count"] for r in rep["runs"]], "facets": rep["facets"]}
        else:
            gs = build_ezk_sphere(args.k, args.d)
            colors = args.colors or args.d + 3
            runs = []
            for s in seeds:
                l = random_labelling(gs.complex, args.k, colors, "equivariant_admissible", s, gs.action)
                runs.append(alpha_sequence(gs, l).to_json())
            ok = verify_generalized_sphere(gs)["ok"] and all(r["congruent"] and r["alpha"][0] == 1 for r in runs)
            values = {"alpha": [r["alpha"] for r in runs]}
        doc = _report("tucker", {"k": args.k, "d": args.d, "seeds": seeds, "rounds": args.rounds or 0}, values, ok)
    elif kind == "invariance":
        _need(args, "k", "d")
        gs = build_ezk_sphere(args.k, args.d)
        colors = args.colors or args.d + 3
        ls = [random_labelling(gs.complex, args.k, colors, "equivariant_admissible", s, gs.action) for s in _seeds(args)]
        rep = alpha_invariance_experiment(gs.complex, gs.action, gs.chains[-1], ls)
        ok = rep["ok"]
        doc = _report("invariance", {"k": args.k, "d": args.d, "seeds": _seeds(args)}, rep, ok)
    elif kind == "dold":
        _need(args, "k", "m", "n")
        doc = dold_exhaustive(args.k, args.m, args.n, args.ring)
        doc["format"] = 1
        doc["certificate"] = {}
        ok = doc["verdict"] == "pass"
    elif kind == "retract":
        _need(args, "k", "d", "m")
        rep = homalg.homology_retract_check(args.k, args.m, args.d)
        ok = rep["match"]
        doc = _report("retract", {"k": args.k, "d": args.d, "m": args.m}, rep, ok)
    else:
        raise UsageError(f"unknown theorem kind {kind}")
    _emit(doc, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_homology(args) -> int:
    _need(args, "in")
    X, _ = _load_complex(args.input)
    H = homalg.reduced_homology(X, args.ring)
    doc = {"format": 1, "in": args.input, "ring": str(args.ring), "reduced_homology": [h.to_json() for h in H]}
    _emit(doc, args.out)
    return EXIT_PASS


def cmd_selftest(args) -> int:
    doc = acceptance.run_all()
    _emit(doc, args.out)
    return EXIT_PASS if doc["verdict"] == "pass" else EXIT_FAIL


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ZkError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zkstokes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--k", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--ring", type=_ring, default=Z, help="Z, Z/m or Zmod:m")
        p.add_argument("--seed", type=int)
        p.add_argument("--seeds", type=int)
        p.add_argument("--colors", type=int)
        p.add_argument("--max-degree", type=int)
        p.add_argument("--rounds", type=int)
        p.add_argument("--in", dest="input")
        p.add_argument("--out")

    p = sub.add_parser("gen", help="generate complexes, spheres and labellings")
    p.add_argument("kind", choices=["join", "alt", "kgon", "ezk-sphere", "subdivide", "labelling"])
    p.add_argument("--mode", default="equivariant_admissible", choices=["admissible", "equivariant_admissible", "tautological"])
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run a verifier; exit 0 iff it passes")
    p.add_argument("kind", choices=["chainmap", "sphere", "admissible", "equivariant", "pm"])
    p.add_argument("--labelling")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("theorem", help="check a theorem instance")
    p.add_argument("kind", choices=["stokes", "tucker", "invariance", "dold", "retract"])
    p.add_argument("--chain")
    p.add_argument("--labelling")
    p.add_argument("--complex")
    common(p)
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("homology", help="reduced homology of a complex file")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--out")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (UsageError, ZkError, KeyError) as exc:
        print(f"zkstokes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
