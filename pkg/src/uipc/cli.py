"""Command-line front end.

Exit codes: 0 success, 1 logical negative (entailment fails, models not
bisimilar, candidate not certified), 2 usage error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .bisim import (bisimilar, bounded_bisimilar, game_strategy, game_value,
                    max_bisimulation)
from .classical import cpc_left_ui, cpc_right_ui
from .config import Config, ResourceLimitError
from .kripke import (PointedModel, dump_model, enumerate_universe,
                     find_countermodel, parse_model)
from .prover import Prover, cpc_entails, cpc_equiv, truth_table
from .quantifiers import (LEFT, RIGHT, Certificate, DeepeningExhausted,
                          model_completion_axiom, uniform_interpolant_set, verify_interpolant)
from .syntax import TOP, ParseError, parse, to_text, varset
from .theories import build_basis

OK, NEGATIVE, USAGE, RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _vars(text: str):
    try:
        return varset(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args) -> Config:
    return Config.from_env(step_budget=args.step_budget, universe_cap=args.models_cap,
                           basis_cap=args.basis_cap)


# -- subcommands --------------------------------------------------------------------

def cmd_prove(args, out) -> int:
    cfg = _config(args)
    if args.psi is None:
        phi, psi = TOP, _formula(args.phi)
    else:
        phi, psi = _formula(args.phi), _formula(args.psi)
    if args.logic == "cpc":
        holds = cpc_entails(phi, psi)
    else:
        holds = Prover(cfg.step_budget).entails(phi, psi)
    if args.raw:
        out.write(("T" if holds else "F") + "\n")
        return OK if holds else NEGATIVE
    out.write(f"{to_text(phi)} |- {to_text(psi)}: {'holds' if holds else 'fails'} ({args.logic})\n")
    if not holds and not args.no_countermodel:
        if args.logic == "cpc":
            names = sorted(phi.vars | psi.vars)
            tp, _ = truth_table(phi, names)
            tq, _ = truth_table(psi, names)
            row = next(i for i in range(1 << len(names)) if tp >> i & 1 and not tq >> i & 1)
            vals = " ".join(f"{x}={'T' if row >> k & 1 else 'F'}" for k, x in enumerate(names))
            out.write(f"countervaluation: {vals}\n")
        else:
            m = find_countermodel(phi, psi, args.max_nodes, cfg.universe_cap)
            if m is None:
                out.write(f"no countermodel with <= {args.max_nodes} nodes\n")
            else:
                out.write("countermodel:\n" + dump_model(m.model, m.point))
    return OK if holds else NEGATIVE


def _cpc_ui(phi, elim, side) -> tuple:
    f = cpc_right_ui if side == RIGHT else cpc_left_ui
    cand, raw = f(phi, elim), f(phi, elim, simplify=False)
    cert = Certificate(side, elim, phi.vars - elim, raw=raw, source="boolean instances")
    cert.var_condition = not (cand.vars & elim)
    cert.entailment = cpc_entails(phi, cand) if side == RIGHT else cpc_entails(cand, phi)
    cert.minimality = cpc_equiv(cand, raw)
    cert.minimality_scope = "exact"
    return cand, cert


def _ui_kwargs(args):
    return dict(depth=args.depth, models=args.models, verify_depth=args.verify_depth)


def cmd_ui(args, out) -> int:
    cfg = _config(args)
    phi = _formula(args.phi)
    elim = _vars(args.eliminate)
    if not elim:
        raise UsageError("--eliminate needs at least one variable")
    if args.logic == "cpc":
        cand, cert = _cpc_ui(phi, elim, args.side)
        steps = ()
    else:
        try:
            res = uniform_interpolant_set(phi, elim, args.side, config=cfg, **_ui_kwargs(args))
        except DeepeningExhausted as exc:
            sys.stderr.write(f"uipc: {exc}\n")
            if args.certificate:
                out.write("\n".join(exc.result.certificate.lines()) + "\n")
            return NEGATIVE
        cand, cert, steps = res.candidate, res.certificate, res.steps
    out.write(to_text(cand) + "\n")
    if args.certificate and not args.raw:
        out.write("\n".join(cert.lines()) + "\n")
        for i, step in enumerate(steps if len(steps) > 1 else (), 1):
            out.write(f"step {i}:\n" + "".join(f"  {line}\n" for line in step.lines()))
    return OK if cert.var_condition and cert.entailment else NEGATIVE


def cmd_verify(args, out) -> int:
    cfg = _config(args)
    phi, cand = _formula(args.phi), _formula(args.candidate)
    elim = _vars(args.eliminate)
    if args.logic == "cpc":
        expected, cert = _cpc_ui(phi, elim, args.side)
        cert.var_condition = not (cand.vars & elim)
        cert.entailment = (cpc_entails(phi, cand) if args.side == RIGHT
                           else cpc_entails(cand, phi))
        cert.minimality = cpc_equiv(cand, expected)
        cert.source = "user"
    else:
        cert = verify_interpolant(phi, elim, args.side, cand, args.models, args.verify_depth, cfg)
        cert.source = "user"
    if args.raw:
        out.write(("T" if cert.certified else "F") + "\n")
    else:
        out.write("\n".join(cert.lines()) + "\n")
        out.write(f"verdict: {'certified' if cert.certified else 'not certified'}\n")
    return OK if cert.certified else NEGATIVE


def _load(path) -> PointedModel:
    try:
        with open(path, encoding="ascii") as fh:
            m = parse_model(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if isinstance(m, PointedModel):
        return m
    roots = [i for i in range(m.size) if m.up[i] == (1 << m.size) - 1]
    if not roots:
        raise UsageError(f"{path}: no 'point:' line and no least node")
    return PointedModel(m, roots[0])


def cmd_bisim(args, out) -> int:
    x, y = _load(args.a), _load(args.b)
    obs = _vars(args.observed)
    try:
        if args.depth is None:
            rel = max_bisimulation(x.model, y.model, obs)
            verdict = bisimilar(x, y, obs)
        else:
            verdict = bounded_bisimilar(x, y, args.depth, obs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.raw:
        out.write(("T" if verdict else "F") + "\n")
        return OK if verdict else NEGATIVE
    kind = "bisimilar" if args.depth is None else f"{args.depth}-bisimilar"
    out.write(f"({x.point}, {y.point}): {'' if verdict else 'not '}{kind} "
              f"on {{{','.join(obs)}}}\n")
    if args.depth is None and verdict:
        out.write("relation:\n" + "".join(f"{w} {v}\n" for w, v in rel))
    if args.game:
        n = args.depth
        if n is None:
            # finite models: full bisimilarity is reached after |A|*|B| rounds
            n = x.model.size * y.model.size
            if not verdict:
                n = next(k for k in range(n + 1) if not game_value(x, y, k, obs))
        out.write("\n".join(game_strategy(x, y, n, obs)) + "\n")
    return OK if verdict else NEGATIVE


def cmd_basis(args, out) -> int:
    cfg = _config(args)
    sig = _vars(args.vars)
    if args.depth < 0:
        raise UsageError("--depth must be non-negative")
    basis = build_basis(sig, args.depth, closure=not args.generators, cap=cfg.basis_cap)
    items = basis.generators if args.generators else basis.reps
    if basis.probe_stable is False:
        sys.stderr.write("uipc: note: the probe universe may not separate every class "
                         "at this depth; the list may be incomplete\n")
    if args.count_only:
        out.write(f"{len(items)}\n")
    else:
        out.write("".join(to_text(f) + "\n" for f in items))
    return OK


def _split(text):
    return [_formula(s) for s in text.split(";") if s.strip()] if text else []


def cmd_axiom(args, out) -> int:
    cfg = _config(args)
    xs = _vars(args.vars)
    y = args.bound
    _vars(y)
    phis, psis = _split(args.phi), _split(args.psi)
    try:
        inst = model_completion_axiom(xs, y, phis, psis, cfg, **_ui_kwargs(args))
    except DeepeningExhausted as exc:
        sys.stderr.write(f"uipc: {exc}\n")
        return NEGATIVE
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(r.certified for r in inst.results)
    if args.raw:
        out.write("".join(to_text(f) + "\n" for f in (inst.exists, *inst.foralls)))
    else:
        out.write(f"Psi: {inst.psi_formula}\n")
        out.write(f"Psi': {inst.psi_prime_formula}\n")
        out.write(f"axiom: {inst.sentence}\n")
        if not ok:
            out.write("note: some interpolants are not certified\n")
    return OK if ok else NEGATIVE


def cmd_models(args, out) -> int:
    cfg = _config(args)
    sig = _vars(args.vars)
    if args.nodes < 1:
        raise UsageError("--nodes must be at least 1")
    u = enumerate_universe(sig, args.nodes, cfg.universe_cap)
    chosen = list(range(len(u)))
    if args.forcing is not None:
        f = _formula(args.forcing)
        if not f.vars <= sig:
            raise UsageError(f"{to_text(f)} mentions variables outside {{{','.join(sig)}}}")
        chosen = [int(i) for i in u.extension(f).nonzero()[0]]
    if args.count_only or args.raw:
        out.write(f"{len(chosen)}\n")
        return OK
    for k, i in enumerate(chosen):
        m = u.pointed[i]
        out.write(("\n" if k else "") + dump_model(m.model, m.point))
    return OK


# -- parser -------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("limits and output")
    g.add_argument("--raw", action="store_true",
                   help="one machine-parsable line per result")
    g.add_argument("--step-budget", type=int, metavar="K",
                   help="prover rule applications per query (env UIPC_STEP_BUDGET)")
    g.add_argument("--models-cap", type=int, metavar="K",
                   help="max pointed models in a universe (env UIPC_MODELS_CAP)")
    g.add_argument("--basis-cap", type=int, metavar="K",
                   help="max generators or classes in a basis (env UIPC_BASIS_CAP)")
    g.add_argument("-v", "--verbose", action="count", default=0,
                   help="log progress to stderr (repeat for debug)")
    return p


def _ui_flags(p, defaults: Config):
    p.add_argument("--depth", type=int, metavar="n",
                   help="initial depth bound of the basis (default: depth of PHI)")
    p.add_argument("--models", type=int, default=defaults.models, metavar="N",
                   help=f"max nodes of the model universe (default {defaults.models})")
    p.add_argument("--verify-depth", type=int, default=defaults.verify_depth, metavar="m",
                   help=f"depth of the minimality check (default {defaults.verify_depth})")


def build_parser() -> argparse.ArgumentParser:
    d = Config()
    common = _common()
    parser = argparse.ArgumentParser(
        prog="uipc", description="Uniform interpolation workbench for IPC and CPC.")
    parser.add_argument("--version", action="version", version=f"uipc {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("prove", parents=[common], help="decide an entailment",
                       description="Decide PHI |- PSI, or |- PHI when PSI is omitted. "
                                   "Exit 0 when it holds, 1 with a countermodel when not.")
    p.add_argument("--logic", choices=("ipc", "cpc"), default="ipc")
    p.add_argument("--max-nodes", type=int, default=4, metavar="B",
                   help="node bound of the countermodel search (default 4)")
    p.add_argument("--no-countermodel", action="store_true", help="skip the countermodel search")
    p.add_argument("phi", metavar="PHI")
    p.add_argument("psi", metavar="PSI", nargs="?")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("ui", parents=[common], help="compute a uniform interpolant",
                       description="Print the right (E_p) or left (A_p) uniform interpolant "
                                   "of PHI. Exit 0 when the variable condition and the "
                                   "entailment hold.")
    p.add_argument("--logic", choices=("ipc", "cpc"), default="ipc")
    p.add_argument("--side", choices=(RIGHT, LEFT), default=RIGHT)
    p.add_argument("--eliminate", required=True, metavar="p[,q]")
    _ui_flags(p, d)
    p.add_argument("--certificate", action="store_true", help="print the certificate")
    p.add_argument("phi", metavar="PHI")
    p.set_defaults(func=cmd_ui)

    p = sub.add_parser("verify", parents=[common], help="certify a given interpolant",
                       description="Check CANDIDATE as the uniform interpolant of PHI. "
                                   "Exit 0 when certified.")
    p.add_argument("--logic", choices=("ipc", "cpc"), default="ipc")
    p.add_argument("--side", choices=(RIGHT, LEFT), default=RIGHT)
    p.add_argument("--eliminate", required=True, metavar="p[,q]")
    p.add_argument("--models", type=int, default=d.models, metavar="N")
    p.add_argument("--verify-depth", type=int, default=d.verify_depth, metavar="m")
    p.add_argument("phi", metavar="PHI")
    p.add_argument("candidate", metavar="CANDIDATE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bisim", parents=[common], help="compare two pointed models",
                       description="Decide (bounded) bisimilarity of the points of two "
                                   "model files. Unpointed models use their least node.")
    p.add_argument("--observed", required=True, metavar="p,q")
    p.add_argument("--depth", type=int, metavar="n", help="bounded bisimilarity of depth n")
    p.add_argument("--game", action="store_true", help="print a winning strategy")
    p.add_argument("a", metavar="A.km")
    p.add_argument("b", metavar="B.km")
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("basis", parents=[common], help="list depth-bounded formula classes",
                       description="One representative per IPC class of formulas of "
                                   "implication depth <= n over VARS.")
    p.add_argument("--vars", required=True, metavar="p,q")
    p.add_argument("--depth", type=int, required=True, metavar="n")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--generators", action="store_true",
                   help="list the lattice generators instead of the classes")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("axiom", parents=[common], help="model-completion axiom instance",
                       description="Render the existential equation system and its "
                                   "quantifier-free replacement built from interpolants.")
    p.add_argument("--vars", default="", metavar="x1,x2")
    p.add_argument("--bound", required=True, metavar="y")
    p.add_argument("--phi", default="", metavar="PHI1;PHI2", help="equations phi = T")
    p.add_argument("--psi", default="", metavar="PSI1;PSI2", help="inequations psi != T")
    _ui_flags(p, d)
    p.set_defaults(func=cmd_axiom)

    p = sub.add_parser("models", parents=[common], help="enumerate pointed models",
                       description="All pointed models over VARS with at most N nodes, "
                                   "up to isomorphism, in the model file format.")
    p.add_argument("--vars", default="", metavar="p,q")
    p.add_argument("--nodes", type=int, required=True, metavar="N")
    p.add_argument("--forcing", metavar="PHI", help="only the models forcing PHI")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_models)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"uipc {args.command}: error: {exc}\n")
        return USAGE
    except ResourceLimitError as exc:
        sys.stderr.write(f"uipc {args.command}: resource limit: {exc}\n")
        return RESOURCE
    except ValueError as exc:
        # invalid config values and similar bad input
        sys.stderr.write(f"uipc {args.command}: error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
