"""Command line front end: verification suites and one-off evaluators."""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .kernel import KernelSpec, eval_kernel, functional_constant
from .matgroup import parse_matrix
from .params import ParamPoint, SpectralParams, ps_to_spectral, spectral_to_ps
from .quad import DomainError, QuadratureError, spherical_pairing
from .scalars import RealCharacter, format_complex, l_factor, parse_complex
from .verify import (
    SuiteConfig,
    UnknownSuiteError,
    reports_to_markdown,
    resolve_suite,
    run_suite,
    suite_names,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_list(text: str) -> list:
    return [parse_complex(v) for v in text.split(",") if v.strip()]


def _bits(text: str) -> list:
    out = [int(v) for v in text.split(",") if v.strip()]
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"parity list must contain only 0 and 1: {text!r}")
    return out


def _point(args) -> ParamPoint:
    lam, nu = _complex_list(args.lam), _complex_list(args.nu)
    n = args.n
    if len(lam) != n + 1 or len(nu) != n:
        raise UsageError(f"--lambda needs {n + 1} entries and --nu needs {n}")
    xi = _bits(args.xi) if args.xi else [0] * (n + 1)
    eta = _bits(args.eta) if args.eta else [0] * n
    if len(xi) != n + 1 or len(eta) != n:
        raise UsageError(f"--xi needs {n + 1} bits and --eta needs {n}")
    return ParamPoint.make(lam, nu, xi, eta)


def _add_point_flags(p, with_n=True):
    if with_n:
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True, help="comma separated complex a+bi")
    p.add_argument("--nu", required=True)
    p.add_argument("--xi", default="", help="comma separated bits")
    p.add_argument("--eta", default="")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glsbo", description="Symmetry breaking kernels for (GL(n+1,R), GL(n,R)).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", required=True, help=f"one of: all, {', '.join(suite_names())}")
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--report", type=Path, default=None)
    v.add_argument("--format", choices=("json", "md"), default="json")

    e = sub.add_parser("eval", help="evaluate a single quantity")
    esub = e.add_subparsers(dest="what", required=True, parser_class=_Parser)
    k = esub.add_parser("kernel")
    _add_point_flags(k)
    k.add_argument("--g", required=True, help="row-major comma separated matrix")
    k.add_argument("--normalized", choices=("none", "bb", "bf"), default="none")
    lf = esub.add_parser("lfactor")
    lf.add_argument("--s", required=True)
    lf.add_argument("--mu", required=True)
    lf.add_argument("--eps", type=int, choices=(0, 1), required=True)
    c = esub.add_parser("constant")
    c.add_argument("--kind", choices=("c", "d", "ctilde", "bplus", "bminus"), required=True)
    c.add_argument("--i", type=int, required=True)
    _add_point_flags(c)

    t = sub.add_parser("transform", help="principal series <-> spectral parameters")
    t.add_argument("--direction", choices=("ps2spec", "spec2ps"), required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--lambda", dest="lam", default=None)
    t.add_argument("--nu", default=None)
    t.add_argument("--xi", default="")
    t.add_argument("--eta", default="")
    t.add_argument("--s", default=None)
    t.add_argument("--t", default=None)
    t.add_argument("--delta", default="")
    t.add_argument("--eps", default="")

    s = sub.add_parser("spherical", help="pairing of the kernel with the spherical vector")
    s.add_argument("--n", type=int, choices=(1, 2), required=True)
    _add_point_flags(s, with_n=False)
    s.add_argument("--tol", type=float, default=None)
    return parser


def _cmd_verify(args) -> int:
    names = suite_names() if args.suite == "all" else [resolve_suite(args.suite)]
    reports = [run_suite(SuiteConfig(name, n=args.n, trials=args.trials, seed=args.seed, tol=args.tol))
               for name in names]
    if args.report is None:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.suite} n={r.n} trials={r.trials} checks={r.checks} "
                  f"max_rel_err={r.max_rel_err:.3e} failures={len(r.failures)} {r.runtime_ms:.0f}ms")
    else:
        if args.format == "md":
            text = reports_to_markdown(reports)
        elif len(reports) == 1:
            text = reports[0].to_json()
        else:
            import json

            text = json.dumps([r.to_dict() for r in reports], indent=2)
        args.report.write_text(text, encoding="utf-8")
        print(f"report written to {args.report}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_eval(args) -> int:
    if args.what == "lfactor":
        v = l_factor(parse_complex(args.s), RealCharacter(args.eps, parse_complex(args.mu)))
        if v.is_pole:
            raise DomainError("L-factor has a pole at this argument")
        print(format_complex(v.value))
        return EXIT_OK
    p = _point(args)
    if args.what == "kernel":
        g = parse_matrix(args.g, args.n + 1)
        print(format_complex(eval_kernel(KernelSpec(p, args.normalized), g)))
        return EXIT_OK
    v = functional_constant(args.kind, args.i, p)
    if v.is_pole:
        raise DomainError("constant has a pole at this parameter")
    print(format_complex(v.value))
    return EXIT_OK


def _fmt_list(vals) -> str:
    return ",".join(format_complex(z) for z in vals)


def _cmd_transform(args) -> int:
    n = args.n
    if args.direction == "ps2spec":
        if args.lam is None or args.nu is None:
            raise UsageError("ps2spec needs --lambda and --nu")
        sp = ps_to_spectral(_point(args))
        print(f"delta={','.join(str(int(b)) for b in sp.delta)}")
        print(f"s={_fmt_list(sp.s)}")
        print(f"eps={','.join(str(int(b)) for b in sp.eps)}")
        print(f"t={_fmt_list(sp.t)}")
        return EXIT_OK
    if args.s is None or args.t is None:
        raise UsageError("spec2ps needs --s and --t")
    s, t = _complex_list(args.s), _complex_list(args.t)
    if len(s) != n + 1 or len(t) != n:
        raise UsageError(f"--s needs {n + 1} entries and --t needs {n}")
    delta = _bits(args.delta) if args.delta else [0] * (n + 1)
    eps = _bits(args.eps) if args.eps else [0] * n
    p = spectral_to_ps(SpectralParams(tuple(delta), s, tuple(eps), t))
    print(f"xi={','.join(str(int(b)) for b in p.xi)}")
    print(f"lambda={_fmt_list(p.lam)}")
    print(f"eta={','.join(str(int(b)) for b in p.eta)}")
    print(f"nu={_fmt_list(p.nu)}")
    return EXIT_OK


def _cmd_spherical(args) -> int:
    p = _point(args)
    tol = args.tol if args.tol is not None else (1e-10 if args.n == 1 else 1e-6)
    print(format_complex(spherical_pairing(args.n, p.lam, p.nu, tol=tol)))
    return EXIT_OK


COMMANDS = {"verify": _cmd_verify, "eval": _cmd_eval, "transform": _cmd_transform,
            "spherical": _cmd_spherical}


def _glue_negative_values(argv: list) -> list:
    """Attach values such as ``-0.4-0.2i,1`` to their flag so they are not read as options."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"-[\d.ij]", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_negative_values(argv))
        if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
            raise UsageError("--n must be at least 1")
        return COMMANDS[args.command](args)
    except (UsageError, UnknownSuiteError, DomainError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"error: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
