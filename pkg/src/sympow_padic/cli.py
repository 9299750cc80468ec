"""Command-line front end: ``sympow <command> [flags]``.

Every command prints one JSON report.  Exit status: 0 when every check
passes, 1 when one fails, 2 for bad flags or inputs, 3 when the requested
precision cannot be reached.
"""

from __future__ import annotations

import argparse
import inspect
import sys
import time

from . import __version__
from .errors import DomainError, IndeterminateError, PrecisionShortfall, SchemaError
from .iwasawa import AlgebraConfig, PadicCharacter
from .kubota import DirichletCharacter, default_level, dirichlet_L_nonpos, kl_element, kl_info
from .lfactory import (
    assemble_admissible,
    assemble_mixed,
    critical_pairs,
    decomposition_check,
    e_admissible,
    enumerate_signs,
    growth_budget,
    growth_target,
    random_components,
)
from .serialize import SCHEMA_VERSION, dumps, element_to_json
from .special import growth_check, log_zero_locus, pollack_log
from .suites import SUITES, run_suite
from .sympower import build_context, structure_report
from .zeros import brute_force_zeros, locate_trivial_zeros, vanishing_order, zero_report

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("global flags")
    g.add_argument("--p", type=int, default=d, help="the prime (odd)")
    g.add_argument("--prec-p", type=int, default=d, dest="prec_p", help="p-adic precision N")
    g.add_argument("--prec-T", type=int, default=d, dest="prec_T", help="T-adic truncation M")
    g.add_argument("--seed", type=int, default=d, help="seed for random components (default 0)")
    g.add_argument("--out", default=d, help="write the report here instead of stdout")
    g.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   dest="no_timings", help="leave wall-clock timings out of the report")


def _context_flags(sp: argparse.ArgumentParser, signs: bool = False) -> None:
    sp.add_argument("--k", type=int, default=2, help="weight of f")
    sp.add_argument("--m", type=int, default=2, help="symmetric power")
    sp.add_argument("--eps-p", type=int, default=-1, dest="eps_p", choices=(-1, 1), help="sign of eps(p)")
    sp.add_argument("--alpha", default=None, help="+, - or root (required for odd m)")
    if signs:
        sp.add_argument("--signs", default=None, help="sign vector such as +- (default: all)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sympow", description="p-adic L-elements of symmetric powers of CM forms")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _global_flags(sp, suppress=True)
        return sp

    sp = add("analyze", "structural invariants and trivial zeros of one context")
    _context_flags(sp)

    sp = add("kl", "Kubota-Leopoldt element and its Bernoulli checks")
    sp.add_argument("--eta", default="triv", help="triv, -3, -4, 5, ... (Kronecker symbol label)")
    sp.add_argument("--level", type=int, default=None, help="Stickelberger level")

    sp = add("special", "log^+- element with its zero locus and growth")
    sp.add_argument("--sign", choices=("+", "-"), default="+")
    sp.add_argument("--b", type=int, default=1, help="index of log^+-_b")
    sp.add_argument("--shift", type=int, default=0, help="apply Tw_shift")
    sp.add_argument("--c-max", type=int, default=3, dest="c_max", help="largest wild conductor exponent probed")

    sp = add("assemble", "mixed or admissible product for one sign vector")
    _context_flags(sp, signs=True)
    sp.add_argument("--kind", choices=("mixed", "admissible"), default="admissible")
    sp.add_argument("--dirichlet", choices=("synthetic", "kl"), default="synthetic")

    sp = add("check-decomposition", "both directions of the sign-matrix expansion")
    _context_flags(sp)
    sp.add_argument("--compare-T", type=int, default=20, dest="compare_T", help="coefficients compared")

    sp = add("efactor", "product against closed form of the admissible e-factor")
    _context_flags(sp, signs=True)
    sp.add_argument("--theta", default=None, help="b,c,s of theta (default: all up to --n-max)")
    sp.add_argument("--j", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=2, dest="n_max")
    sp.add_argument("--form", choices=("printed", "corrected"), default="printed")

    sp = add("zeros", "trivial-zero records, order predictions and leading terms")
    _context_flags(sp, signs=True)

    sp = add("verify", "run a verification suite")
    sp.add_argument("suite", help=", ".join(SUITES))
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--eta", default=None)
    sp.add_argument("--level", type=int, default=None)
    sp.add_argument("--rtilde", type=int, default=None)
    sp.add_argument("--form", choices=("printed", "corrected"), default=None)
    sp.add_argument("--seeds", type=int, default=None, help="number of seeds, starting at --seed")
    return ap


def _opt(args, name, default=None):
    v = getattr(args, name, None)
    return default if v is None else v


def _context(args):
    if args.m % 2 and args.alpha is None:
        raise UsageError("odd m needs --alpha (+, - or root)")
    return build_context(_opt(args, "p", 5), args.k, args.m, args.eps_p, args.alpha)


def _signs(args, ctx) -> list:
    if args.signs is None:
        return enumerate_signs(ctx.rt)
    from .lfactory import SignVector

    s = SignVector.parse(args.signs)
    if len(s) != ctx.rt:
        raise UsageError(f"--signs needs {ctx.rt} entries for m={ctx.m}")
    return [s]


def _config(args, N: int, M: int) -> AlgebraConfig:
    return AlgebraConfig(_opt(args, "p", 5), _opt(args, "prec_p", N), _opt(args, "prec_T", M))


def _check(name: str, passed: bool, **extra) -> dict:
    return {"name": name, **extra, "passed": bool(passed)}


# ---------------------------------------------------------------------------
# commands; each returns (config dict, payload, checks)


def cmd_analyze(args):
    ctx = _context(args)
    struct = structure_report(ctx)
    checks = [_check("hasse closed form equals polygon gap", struct["hasse_invariant"]["agree"]),
              _check("d+ + d- = m + 1", struct["d_plus"] + struct["d_minus"] == ctx.m + 1)]
    return ctx.as_dict(), {"structure": struct, "zeros": zero_report(ctx)}, checks


def cmd_kl(args):
    cfg = _config(args, 8, 24)
    eta = DirichletCharacter.parse(args.eta)
    level = args.level or default_level(cfg)
    L = kl_element(eta, cfg, level)
    info = kl_info(eta, cfg, level)
    suite = run_suite("kl", p=cfg.p, etas=(eta.label,), N=cfg.N, M=cfg.M, level=level)
    oracle = {str(j): str(dirichlet_L_nonpos(eta, j)) for j in range(0, -6, -1)}
    payload = {"element": element_to_json(L), "info": info.__dict__, "L_eta_at_j": oracle}
    conf = {"p": cfg.p, "N": cfg.N, "M": cfg.M, "level": level, "eta": eta.label, "chi_gamma0": cfg.u}
    return conf, payload, suite.checks


def cmd_special(args):
    cfg = _config(args, 16, 200)
    L = pollack_log(args.sign, args.b, cfg, shift=args.shift)
    checks = []
    if args.shift == 0:
        for probe in log_zero_locus(args.sign, args.b, cfg, args.c_max):
            checks.append(_check(f"conductor p^{probe.c}, j={probe.j}", probe.agrees and probe.floor >= 1,
                                 **probe.as_dict()))
    g = growth_check(L, args.b)
    checks.append(_check(f"coefficients grow like n^{args.b}/2", g["ok"], **g))
    conf = {"p": cfg.p, "N": cfg.N, "M": cfg.M, "sign": args.sign, "b": args.b, "shift": args.shift,
            "chi_gamma0": cfg.u}
    return conf, {"element": element_to_json(L)}, checks


def _alpha_element_json(x) -> dict:
    return {"alpha_squared": None if x.d is None else str(x.d), "A": element_to_json(x.A),
            "B": None if x.B is None else element_to_json(x.B)}


def cmd_assemble(args):
    ctx = _context(args)
    cfg = _config(args, 20, 30)
    seed = _opt(args, "seed", 0)
    lam, adm = random_components(ctx, cfg, seed=seed, dirichlet=args.dirichlet)
    out, checks = {}, []
    for s in _signs(args, ctx):
        a = assemble_mixed(ctx, lam, s) if args.kind == "mixed" else assemble_admissible(ctx, adm, s)
        out[str(s)] = {"growth": a.growth, "pole_divisor": a.pole_divisor, "twists": a.twists,
                       "element": _alpha_element_json(a.element)}
        checks.append(_check(f"growth budget {s}", growth_budget(ctx, s) == growth_target(ctx),
                             budget=growth_budget(ctx, s), target=growth_target(ctx)))
    conf = {**ctx.as_dict(), "N": cfg.N, "M": cfg.M, "seed": seed, "kind": args.kind,
            "dirichlet": lam.provenance, "chi_gamma0": cfg.u}
    return conf, out, checks


def cmd_check_decomposition(args):
    ctx = _context(args)
    cfg = _config(args, 40, 100)
    seed = _opt(args, "seed", 0)
    lam, adm = random_components(ctx, cfg, seed=seed)
    rep = decomposition_check(ctx, adm, cfg, compare_M=args.compare_T, lambda_comps=lam)
    if rep.target <= 0:
        raise PrecisionShortfall(f"declared slack {rep.slack} uses up all {cfg.N} digits; raise --prec-p",
                                 needed=rep.slack + 1, available=cfg.N)
    checks = [_check(f"expansion s={s}", v >= rep.target, residual_valuation=v) for s, v in rep.expansion.items()]
    checks += [_check(f"inverse t={t}", v >= rep.target, residual_valuation=v) for t, v in rep.inverse.items()]
    checks += [_check(f"split component {i}", min(a, b) >= rep.target, residual_valuation=[a, b])
               for i, (a, b) in enumerate(rep.split)]
    conf = {**ctx.as_dict(), "N": cfg.N, "M": cfg.M, "seed": seed, "slack": rep.slack, "chi_gamma0": cfg.u}
    return conf, rep.as_dict(), checks


def _parse_theta(text: str, p: int) -> PadicCharacter:
    try:
        b, c, s = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--theta takes b,c,s (three integers)") from None
    return PadicCharacter(b, c, s, 0).validate(p)


def cmd_efactor(args):
    ctx = _context(args)
    if args.theta is not None:
        if args.j is None:
            raise UsageError("--theta needs --j")
        pairs = [(_parse_theta(args.theta, ctx.p), args.j)]
    else:
        pairs = [(th, j) for th, j in critical_pairs(ctx, args.n_max) if args.j is None or j == args.j]
    rows, checks = [], []
    for s in _signs(args, ctx):
        for th, j in pairs:
            r = e_admissible(ctx, s, th, j)
            ok = r.printed_agrees if args.form == "printed" else r.corrected_agrees
            label = f"s={s} theta=({th.b},{th.c},{th.s}) j={j}"
            rows.append({"signs": str(s), "theta": [th.b, th.c, th.s], "conductor": th.conductor_exponent(),
                         "j": j, "product": r.product.as_dict(), "closed_printed": str(r.closed_printed),
                         "closed_corrected": str(r.closed_corrected), "printed_agrees": r.printed_agrees,
                         "corrected_agrees": r.corrected_agrees})
            checks.append(_check(label, ok))
    conf = {**ctx.as_dict(), "form": args.form, "n_max": args.n_max}
    return conf, {"pairs": rows}, checks


def cmd_zeros(args):
    ctx = _context(args)
    rep = zero_report(ctx)
    keep = {str(s) for s in _signs(args, ctx)}
    rep["signs"] = {k: v for k, v in rep["signs"].items() if k in keep}
    checks = []
    for key, entry in rep["signs"].items():
        recs = locate_trivial_zeros(ctx, key)
        entry["predictions"] = [{"a": r.j, "j": r.j, **vanishing_order(ctx, key, r.j, r.j).as_dict()}
                                for r in recs]
        found = sorted((r.sign, r.j) for r in brute_force_zeros(ctx, key))
        listed = sorted((r.sign, r.j) for r in recs)
        checks.append(_check(f"records {key} match a scan of the e-factors", found == listed))
    return ctx.as_dict(), rep, checks


def cmd_verify(args):
    name = args.suite
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    kw = {}
    if getattr(args, "p", None) is not None:
        kw["p"] = args.p
    if getattr(args, "prec_p", None) is not None:
        kw["N"] = args.prec_p
    if getattr(args, "prec_T", None) is not None:
        kw["M"] = args.prec_T
    if args.eta is not None:
        kw["etas"] = (args.eta,)
    if args.level is not None:
        kw["level"] = args.level
    if args.rtilde is not None:
        kw["rtilde"] = args.rtilde
    if args.form is not None:
        kw["form"] = args.form
    if args.k is not None:
        kw["ks"] = (args.k,)
        if args.m is not None:
            kw["cases"] = [(args.m, args.k)]
    if args.seeds is not None:
        start = _opt(args, "seed", 0)
        kw["seeds"] = range(start, start + args.seeds)
    from .suites import suite_appendix, suite_decomposition, suite_efactor, suite_kl, suite_logpm, \
        suite_matrix, suite_polygons

    fn = {"kl": suite_kl, "logpm": suite_logpm, "matrix": suite_matrix, "decomposition": suite_decomposition,
          "efactor": suite_efactor, "polygons": suite_polygons, "appendix": suite_appendix}[name]
    accepted = set(inspect.signature(fn).parameters)
    kw = {k: v for k, v in kw.items() if k in accepted}
    res = run_suite(name, **kw)
    d = res.as_dict(timings=False)
    conf = {"suite": name, **d.pop("params")}
    return conf, {k: v for k, v in d.items() if k != "checks"}, res.checks, res.timings


COMMANDS = {
    "analyze": cmd_analyze, "kl": cmd_kl, "special": cmd_special, "assemble": cmd_assemble,
    "check-decomposition": cmd_check_decomposition, "efactor": cmd_efactor, "zeros": cmd_zeros,
    "verify": cmd_verify,
}


def run(argv=None) -> tuple:
    """Parse and run; returns (exit code, report dict or None, message, out path)."""
    args = build_parser().parse_args(argv)
    dest = getattr(args, "out", None)
    t0 = time.time()
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, DomainError, SchemaError) as exc:
        return EXIT_USAGE, None, f"error: {exc}", dest
    except (PrecisionShortfall, IndeterminateError) as exc:
        return EXIT_PRECISION, None, f"precision shortfall: {exc}", dest
    conf, payload, checks = out[:3]
    timings = {"total_seconds": round(time.time() - t0, 3)}
    if len(out) > 3 and out[3]:
        timings["cases"] = out[3]
    passed = all(c["passed"] for c in checks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "sympow", "version": __version__},
        "command": args.command,
        "config": conf,
        "payload": payload,
        "checks": checks,
        "passed": passed,
    }
    if not getattr(args, "no_timings", False):
        report["timings"] = timings
    n_bad = sum(not c["passed"] for c in checks)
    msg = f"{args.command}: {'pass' if passed else 'FAIL'} ({len(checks)} checks, {n_bad} failed)"
    return (EXIT_PASS if passed else EXIT_FAIL), report, msg, dest


def main(argv=None) -> int:
    try:
        code, report, msg, out = run(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    if report is not None:
        text = dumps(report)
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
