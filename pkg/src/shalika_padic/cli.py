"""Batch command line front end.

Exit codes: 0 success, 1 property violated (a witness file is written next to
the report), 2 input error, 3 inconclusive at the working precision.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import gl2_symbols, highest_weight, iwasawa, local_reps, shalika_zeta, weights
from .exactnum import FiniteCharacter

OK, VIOLATED, INPUT_ERROR, INCONCLUSIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}")


def _fracs(text):
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected comma separated rationals, got {text!r}")


def _read_json(path):
    if not os.path.exists(path):
        raise InputError(f"file not found: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise InputError(f"{path}: {e}")


def _write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1, default=str)
        fh.write("\n")


def _need_seed(args):
    if args.seed is None:
        if args.ci:
            raise InputError("--seed is required in CI mode")
        args.seed = 0
    return args.seed


def _positive(args, *names):
    for n in names:
        v = getattr(args, n, None)
        if isinstance(v, int) and v <= 0:
            raise InputError(f"--{n.replace('_', '-')} must be positive")


def _symbol(args):
    if getattr(args, "symbol_file", None):
        return gl2_symbols.EigenSymbol.from_dict(_read_json(args.symbol_file))
    if args.form not in gl2_symbols.REFERENCE_FORMS:
        raise InputError(f"unknown form {args.form!r}; known: {sorted(gl2_symbols.REFERENCE_FORMS)}")
    return gl2_symbols.reference_symbol(args.form)


def _load_measure(path):
    d = _read_json(path)
    try:
        return iwasawa.MeasureTower.from_dict(d)
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"{path}: bad measure file ({e})")


# ------------------------------------------------------------- handlers
# each returns (status, report, witness or None, summary line)

def cmd_weight_analyze(args):
    try:
        mu = weights.Weight.single(_ints(args.mu))
    except weights.WeightError as e:
        raise InputError(str(e))
    part = weights.PrimePartition.rational(args.p, args.delta) if args.p else None
    rep = weights.analyze(mu, part, _ints(args.beta) if args.beta else (1,))
    if not rep.get("pure"):
        return INPUT_ERROR, rep, None, rep.get("error", "weight not pure")
    return OK, rep, None, f"w = {rep['purity_weight']}, Crit = {rep['crit']}"


def _satake(args):
    al = _fracs(args.alphas)
    try:
        return local_reps.SatakeParams(args.n, args.q, tuple(al))
    except ValueError as e:
        raise InputError(str(e))


def cmd_hecke_charpoly(args):
    P = _satake(args)
    closed = local_reps.up_charpoly(P)
    brute = local_reps.brute_force_charpoly(P)
    ok = [Fraction(x) for x in brute] == closed
    rep = {"n": P.n, "q": P.q, "alphas": [str(a) for a in P.alphas],
           "closed_form": [str(x) for x in closed], "brute_force": [str(x) for x in brute], "equal": ok}
    wit = None if ok else {"kind": "charpoly", "n": P.n, "q": P.q, "alphas": [str(a) for a in P.alphas]}
    return (OK if ok else VIOLATED), rep, wit, f"characteristic polynomials {'agree' if ok else 'differ'}"


def cmd_hecke_ordinary(args):
    mu = weights.Weight.single(_ints(args.mu))
    part = weights.PrimePartition.rational(args.q)
    vals = _ints(args.valuations) if args.valuations else None
    al = tuple(_fracs(args.alphas)) if args.alphas else None
    try:
        P = local_reps.SatakeParams(mu.n, args.q, al, tuple(vals) if vals else None)
        tau = local_reps.q_ordinary_tau(P, mu, part, str(args.q), strip=not args.no_strip)
    except local_reps.InconsistencyError as e:
        rep = {"error": str(e)}
        return VIOLATED, rep, {"kind": "ordinary", "mu": args.mu, "q": args.q,
                               "valuations": list(P.valuations)}, str(e)
    except ValueError as e:
        raise InputError(str(e))
    order = local_reps.b_ordinary_check(P, mu, part, str(args.q))
    rep = {"tau": None if tau is None else list(tau), "target": local_reps.q_ordinary_target(mu, part, str(args.q)),
           "b_ordinary_order": order, "valuations": list(P.valuations)}
    return OK, rep, None, f"tau = {tau}"


def cmd_hecke_regular(args):
    P = _satake(args)
    tau = tuple(_ints(args.tau))
    eta = Fraction(args.eta)
    ok = local_reps.q_regular_check(P, tau, eta)
    rep = {"tau": list(tau), "eta": str(eta), "regular": ok, "simple_root": local_reps.simple_root(P, tau)}
    wit = None if ok else {"kind": "regular", "n": P.n, "q": P.q,
                           "alphas": [str(a) for a in P.alphas], "tau": list(tau), "eta": str(eta)}
    return (OK if ok else VIOLATED), rep, wit, f"regular: {ok}"


def cmd_cosets_verify(args):
    rep = local_reps.parahoric_cosets(args.q, args.n)
    ok = rep["ok"]
    wit = None if ok else {"kind": "cosets", "n": args.n, "q": args.q}
    return (OK if ok else VIOLATED), rep, wit, f"{rep['cosets']} cosets, expected {args.q ** (args.n ** 2)}"


def cmd_zeta_verify(args):
    al = _fracs(args.alphas)
    if len(al) != 2:
        raise InputError("two Satake parameters required")
    P = local_reps.SatakeParams(1, args.q, tuple(al))
    rep = shalika_zeta.zeta_check(P, args.beta, args.j, args.delta, args.kind)
    bad = [r for r in rep["rows"] if not r["equal"]]
    wit = None
    if bad:
        wit = {"kind": "zeta", "q": args.q, "alphas": [str(a) for a in al], "beta": args.beta,
               "j": args.j, "delta": args.delta, "form": args.kind, "chi": bad[0]["chi"]}
    return (OK if rep["ok"] else VIOLATED), rep, wit, f"{rep['checked']} characters, equal: {rep['ok']}"


def cmd_rep_manin(args):
    seed = _need_seed(args)
    mu = weights.Weight.single(_ints(args.mu))
    L = highest_weight.build_rep(mu, args.dim_bound)
    cs = weights.crit_set(mu).values()
    j = cs[0] if args.j is None else args.j
    j2 = cs[1] if args.j2 is None and len(cs) > 1 else args.j2
    if j2 is None:
        raise InputError("need two critical integers")
    rep = highest_weight.manin_congruence_check(L, j, j2, args.beta, args.samples, args.p, seed)
    rep["dim"] = L.dim
    wit = None
    if not rep["passed"]:
        w0 = rep["witnesses"][0] if rep["witnesses"] else {}
        wit = {"kind": "rep_manin", "mu": args.mu, "p": args.p, "beta": args.beta, "j": j, "j2": j2,
               "u": w0.get("u")}
    return (OK if rep["passed"] else VIOLATED), rep, wit, \
        f"kappa_{j} = kappa_{j2} mod {args.p}^{args.beta} on {args.samples} samples: {rep['passed']}"


def cmd_symbols_build(args):
    s = _symbol(args)
    rep = s.to_dict()
    rep["dimension"] = s.space.dimension()
    return OK, rep, None, f"eigensymbol for level {s.N}, weight {s.k}"


def cmd_symbols_stabilize(args):
    s = _symbol(args)
    try:
        st = gl2_symbols.ordinary_stabilize(s, args.p, args.prec)
    except ValueError as e:
        raise InputError(str(e))
    paths = [(gl2_symbols.monomial(i, s.space.w), None, Fraction(a, args.p))
             for i in range(s.space.w + 1) for a in range(1, args.p)]
    ok = gl2_symbols.check_up_eigen(st, paths)
    rep = {"p": args.p, "N": args.prec, "alpha": st.alpha_int(), "up_eigen": ok}
    wit = None if ok else {"kind": "up_eigen", "form": args.form, "p": args.p, "prec": args.prec}
    return (OK if ok else VIOLATED), rep, wit, f"alpha = {st.alpha_int()} mod {args.p}^{args.prec}"


def cmd_symbols_tower(args):
    s = _symbol(args)
    try:
        st = gl2_symbols.ordinary_stabilize(s, args.p, args.prec)
    except ValueError as e:
        raise InputError(str(e))
    js = _ints(args.j) if args.j else None
    try:
        tower, ms = gl2_symbols.build_padic_L(st, args.beta_max, js, args.sign)
    except ArithmeticError as e:
        return VIOLATED, {"error": str(e)}, {"kind": "tower", "form": args.form, "p": args.p,
                                              "prec": args.prec, "beta_max": args.beta_max}, str(e)
    files = {}
    if args.measure_dir:
        os.makedirs(args.measure_dir, exist_ok=True)
        for j, m in ms.items():
            path = os.path.join(args.measure_dir, f"measure_j{j}.json")
            _write_json(path, m.to_dict())
            files[str(j)] = path
    rep = {"p": args.p, "N": args.prec, "beta_max": args.beta_max, "alpha": st.alpha_int(),
           "js": sorted(ms), "distribution": True, "manin": True, "files": files}
    return OK, rep, None, f"towers for j in {sorted(ms)} satisfy distribution and Manin relations"


def cmd_measure_check(args):
    m = _load_measure(args.file)
    if len(m.levels) < 2:
        return OK, {"levels": sorted(m.levels), "note": "single level"}, None, "nothing to compare"
    ok, wit = iwasawa.measure_distribution_ok(m)
    rep = {"levels": sorted(m.levels), "distribution": ok, "witness": wit}
    if not ok:
        wit = dict(wit, kind="distribution", measure=m.to_dict())
    return (OK if ok else VIOLATED), rep, wit, f"distribution relation: {ok}"


def cmd_measure_twist(args):
    m = _load_measure(args.file)
    t = iwasawa.eps_cyc_twist(m, args.k)
    if args.output:
        _write_json(args.output, t.to_dict())
    ok = len(t.levels) < 2 or iwasawa.measure_distribution_ok(t, level_modulus=True)[0]
    return OK, {"k": args.k, "output": args.output, "distribution_preserved": ok}, None, \
        f"twisted by eps^{args.k}"


def cmd_measure_push(args):
    m = _load_measure(args.file)
    nu = FiniteCharacter.from_dict(_read_json(args.nu)) if args.nu else None
    try:
        out = iwasawa.pushforward(m, m.tower, nu)
    except iwasawa.TowerError as e:
        raise InputError(str(e))
    if args.output:
        _write_json(args.output, out.to_dict())
    return OK, {"output": args.output, "levels": sorted(out.levels)}, None, "pushed forward"


def cmd_measure_certify(args):
    ms = [_load_measure(f) for f in args.file]
    try:
        cert = iwasawa.nonvanishing_certificate(ms, M=args.M, level=args.level, scan_level=args.scan_level)
    except iwasawa.TowerError as e:
        raise InputError(str(e))
    if cert["status"] != "certified":
        return INCONCLUSIVE, cert, None, "inconclusive, raise precision"
    if not cert["consistent"]:
        return VIOLATED, cert, {"kind": "certificate", "files": args.file, "bound": cert["bound"],
                                "vanishing": cert["vanishing"]}, "brute force contradicts the bound"
    return OK, cert, None, f"at most {cert['bound']} characters with vanishing integral; " \
                           f"{len(cert['vanishing'])} found among {cert['scanned']}"


def cmd_interp_check(args):
    s = _symbol(args)
    st = gl2_symbols.ordinary_stabilize(s, args.p, args.prec)
    js = _ints(args.j) if args.j else list(range(s.space.w + 1))
    _, ms = gl2_symbols.build_padic_L(st, args.beta, js, 0)
    reps = [gl2_symbols.interpolation_check(st, ms, args.beta, j) for j in js]
    ok = all(r["ok"] for r in reps)
    short = any("reason" in e for r in reps for e in r["classes"].values())
    if not ok and short:
        return INCONCLUSIVE, {"checks": reps}, None, "precision too low for a meaningful ratio"
    wit = None
    if not ok:
        bad = next(r for r in reps if not r["ok"])
        wit = {"kind": "interp", "form": args.form, "p": args.p, "prec": args.prec,
               "beta": args.beta, "j": bad["j"]}
    return (OK if ok else VIOLATED), {"checks": reps}, wit, f"ratios constant for j in {js}: {ok}"


# -------------------------------------------------------------- witnesses

def verify_witness(w):
    """True when the recorded violation is reproduced."""
    kind = w.get("kind")
    if kind == "distribution":
        m = iwasawa.MeasureTower.from_dict(w["measure"])
        b, lab = w["beta"], w["label"]
        idx = m.tower.index(b)[lab]
        fibre = sum(v for i, v in enumerate(m.levels[b + 1]) if m.tower.proj[b + 1][i] == idx)
        return (m.levels[b][idx] - fibre) % m.modulus != 0
    if kind == "rep_manin":
        mu = weights.Weight.single(_ints(w["mu"]))
        L = highest_weight.build_rep(mu)
        p, beta = w["p"], w["beta"]
        k1 = highest_weight.kappa_j(L, w["j"]).functional
        k2 = highest_weight.kappa_j(L, w["j2"]).functional
        Xi = highest_weight.xi_lattice_matrix(L)
        d = highest_weight.tp_exponents(L)
        tu = [x * Fraction(p) ** (beta * e) for x, e in zip(w["u"], d)]
        diff = sum(x * y for x, y in zip(highest_weight.rowvec_mat(k1, Xi), tu)) - \
            sum(x * y for x, y in zip(highest_weight.rowvec_mat(k2, Xi), tu))
        return (diff / p ** beta).denominator % p == 0
    if kind == "charpoly":
        P = local_reps.SatakeParams(w["n"], w["q"], tuple(Fraction(a) for a in w["alphas"]))
        return [Fraction(x) for x in local_reps.brute_force_charpoly(P)] != local_reps.up_charpoly(P)
    if kind == "regular":
        P = local_reps.SatakeParams(w["n"], w["q"], tuple(Fraction(a) for a in w["alphas"]))
        return not local_reps.q_regular_check(P, tuple(w["tau"]), Fraction(w["eta"]))
    if kind == "cosets":
        return not local_reps.parahoric_cosets(w["q"], w["n"])["ok"]
    if kind == "zeta":
        P = local_reps.SatakeParams(1, w["q"], tuple(Fraction(a) for a in w["alphas"]))
        W = (shalika_zeta.LocalShalikaFunction.spherical(P, w["delta"]) if w["form"] == "spherical"
             else shalika_zeta.LocalShalikaFunction.eigen(P, 1, w["delta"]))
        chi = FiniteCharacter.from_dict(w["chi"])
        from .exactnum import gauss_sum
        lhs = shalika_zeta.local_zeta_twisted(W, chi, w["j"], w["beta"])
        rhs = shalika_zeta.localbirch_rhs(w["q"], 1, w["beta"], w["delta"], w["j"], gauss_sum(chi),
                                          W(-w["delta"]))
        return lhs != rhs
    if kind == "certificate":
        return len(w["vanishing"]) > w["bound"]
    raise InputError(f"no checker for witness kind {kind!r}")


def cmd_verify_witness(args):
    w = _read_json(args.witness)
    confirmed = verify_witness(w)
    return (OK if confirmed else VIOLATED), {"kind": w.get("kind"), "confirmed": confirmed}, None, \
        f"witness {'confirmed' if confirmed else 'not reproduced'}"


# -------------------------------------------------------------- parser

def build_parser():
    ap = argparse.ArgumentParser(prog="shalika-padic", description=__doc__.splitlines()[0])
    ap.add_argument("--report", default="report.json", help="structured report path")
    ap.add_argument("--seed", type=int, default=None, help="seed for sampling operations")
    ap.add_argument("--ci", action="store_true", help="require explicit seeds")
    sub = ap.add_subparsers(dest="group", required=True)

    def group(name):
        g = sub.add_parser(name)
        return g.add_subparsers(dest="action", required=True)

    g = group("weight")
    a = g.add_parser("analyze")
    a.add_argument("--mu", required=True)
    a.add_argument("--p", type=int)
    a.add_argument("--delta", type=int, default=0)
    a.add_argument("--beta")
    a.set_defaults(func=cmd_weight_analyze)

    g = group("hecke")
    a = g.add_parser("charpoly")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--alphas", required=True)
    a.set_defaults(func=cmd_hecke_charpoly)
    a = g.add_parser("ordinary")
    a.add_argument("--mu", required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--alphas")
    a.add_argument("--valuations")
    a.add_argument("--no-strip", action="store_true")
    a.set_defaults(func=cmd_hecke_ordinary)
    a = g.add_parser("regular")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--alphas", required=True)
    a.add_argument("--tau", required=True)
    a.add_argument("--eta", required=True)
    a.set_defaults(func=cmd_hecke_regular)

    g = group("cosets")
    a = g.add_parser("verify")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.set_defaults(func=cmd_cosets_verify)

    g = group("zeta")
    a = g.add_parser("verify")
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--alphas", required=True)
    a.add_argument("--beta", type=int, default=1)
    a.add_argument("--j", type=int, default=0)
    a.add_argument("--delta", type=int, default=0)
    a.add_argument("--kind", choices=("spherical", "eigen"), default="spherical")
    a.set_defaults(func=cmd_zeta_verify)

    g = group("rep")
    a = g.add_parser("manin-check")
    a.add_argument("--mu", required=True)
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--beta", type=int, required=True)
    a.add_argument("--samples", type=int, default=200)
    a.add_argument("--j", type=int)
    a.add_argument("--j2", type=int)
    a.add_argument("--dim-bound", type=int, default=3000)
    a.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    a.set_defaults(func=cmd_rep_manin)

    g = group("symbols")
    for name, fn in (("build", cmd_symbols_build), ("stabilize", cmd_symbols_stabilize),
                     ("tower", cmd_symbols_tower)):
        a = g.add_parser(name)
        a.add_argument("--form", default="Delta")
        a.add_argument("--symbol-file")
        if name != "build":
            a.add_argument("--p", type=int, required=True)
            a.add_argument("--prec", type=int, default=10)
        if name == "tower":
            a.add_argument("--beta-max", type=int, default=2)
            a.add_argument("--j")
            a.add_argument("--sign", type=int, default=0, choices=(-1, 0, 1))
            a.add_argument("--measure-dir")
        a.set_defaults(func=fn)

    g = group("measure")
    a = g.add_parser("check")
    a.add_argument("file")
    a.set_defaults(func=cmd_measure_check)
    a = g.add_parser("twist")
    a.add_argument("file")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--output")
    a.set_defaults(func=cmd_measure_twist)
    a = g.add_parser("push")
    a.add_argument("file")
    a.add_argument("--nu", help="character file")
    a.add_argument("--output")
    a.set_defaults(func=cmd_measure_push)
    a = g.add_parser("certify")
    a.add_argument("file", nargs="+")
    a.add_argument("--M", type=int)
    a.add_argument("--level", type=int)
    a.add_argument("--scan-level", type=int, default=2)
    a.set_defaults(func=cmd_measure_certify)

    g = group("interp")
    a = g.add_parser("check")
    a.add_argument("--form", default="Delta")
    a.add_argument("--symbol-file")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--prec", type=int, default=20)
    a.add_argument("--beta", type=int, default=1)
    a.add_argument("--j")
    a.set_defaults(func=cmd_interp_check)

    a = sub.add_parser("verify-witness")
    a.add_argument("witness")
    a.set_defaults(func=cmd_verify_witness, action=None)
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    try:
        _positive(args, "p", "q", "n", "prec", "beta", "beta_max", "samples", "M", "level")
        status, report, witness, summary = args.func(args)
    except (InputError, weights.WeightError, FileNotFoundError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    report = {"command": [args.group] + ([args.action] if args.action else []),
              "status": status, "result": report}
    if args.seed is not None:
        report["seed"] = args.seed
    _write_json(args.report, report)
    if witness is not None:
        wpath = os.path.splitext(args.report)[0] + ".witness.json"
        _write_json(wpath, witness)
        print(f"witness written to {wpath}")
    print(summary)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
