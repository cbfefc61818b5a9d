"""Command-line front end.

Subcommands:
  poincare   Poincare polynomial of one of the moduli spaces.
  relations  zeta / zeta_{r,s} / rho relation polynomials in canonical text.
  verify     run a verification suite; exit 0 verified, 1 falsified,
             3 resource limit hit.
  cache      administer the on-disk Groebner basis cache.

All result payloads go to stdout as schema-versioned JSON (or a plain table
or LaTeX row with --format).  Output is byte-identical across runs of the
same invocation; wall-clock timings are only included with --timing, and
progress of long computations goes to stderr.
"""

import argparse
import json
import sys
import time

from .algebra import AlgebraError
from .cache import GroebnerCache, default_cache_dir
from .groebner import ResourceLimit, normal_form
from .poincare import GenusParams, ParameterError, Space, identity_suite, poincare
from . import rings, symprod

SCHEMA = "higgsc/1"

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

# formula lineage echoed in the JSON envelope, keyed by space
_PROVENANCE = {
    "J": ["jacobian-factor"],
    "Sigma": ["macdonald-recurrence"],
    "SigmaInf": ["macdonald-recurrence", "stable-limit"],
    "BG": ["gauge-classifying-space"],
    "BGbar": ["gauge-classifying-space", "determinant-quotient"],
    "N": ["harder-narasimhan"],
    "Ntilde": ["harder-narasimhan", "jacobian-factor"],
    "F": ["downward-flow-stratum"],
    "M": ["morse-stratification"],
    "Mtilde": ["morse-stratification", "jacobian-factor"],
    "MGamma": ["morse-stratification", "invariant-part"],
    "Mk": ["k-pole-stratification"],
    "MtildeK": ["k-pole-stratification", "jacobian-factor"],
    "Z": ["compactification-divisor"],
    "Mbar": ["compactification-sum"],
    "MtildeInf": ["k-pole-stratification", "stable-limit"],
}

_LATEX_NAMES = {
    "alpha": r"\alpha", "beta": r"\beta", "gamma": r"\gamma",
    "eta": r"\eta", "sigma": r"\sigma",
}


def _envelope(command, result, provenance, timing):
    return {
        "schema": SCHEMA,
        "command": command,
        "result": result,
        "provenance": provenance,
        "timing": timing,
    }


def _emit_json(env):
    sys.stdout.write(json.dumps(env, indent=2, sort_keys=True) + "\n")


def _coeff_row(poly):
    return [str(c) for c in poly.coeffs]


def _latex_coeff(c):
    if c.denominator == 1:
        return str(c.numerator)
    return r"\frac{%d}{%d}" % (c.numerator, c.denominator)


def _latex_poly(p):
    """LaTeX rendering of a multivariate polynomial, canonical term order."""
    if p.is_zero():
        return "0"
    parts = []
    for exps, coeff in p._sorted_terms():
        factors = []
        for name, e in zip(p.spec.names, exps):
            if e == 0:
                continue
            sym = _LATEX_NAMES.get(name, r"\mathit{%s}" % name)
            factors.append(sym if e == 1 else "%s^{%d}" % (sym, e))
        body = "".join(factors)
        if not body:
            parts.append(_latex_coeff(coeff))
        elif coeff == 1:
            parts.append(body)
        elif coeff == -1:
            parts.append("-" + body)
        else:
            parts.append(_latex_coeff(coeff) + body)
    return " + ".join(parts).replace("+ -", "- ")


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "wallTime"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


# -- poincare ------------------------------------------------------------------


def _cmd_poincare(args):
    try:
        space = Space(args.space)
        params = GenusParams(args.genus, n=args.n, d=args.d, k=args.k,
                             trunc=args.trunc)
        poly = poincare(space, params)
    except (ParameterError, AlgebraError) as exc:
        print(f"higgsc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "table":
        sys.stdout.write(" ".join(_coeff_row(poly)) + "\n")
    elif args.format == "latex":
        sys.stdout.write(" & ".join(_coeff_row(poly)) + r" \\" + "\n")
    else:
        command = {"subcommand": "poincare", "space": args.space,
                   "genus": args.genus, "n": args.n, "d": args.d,
                   "k": args.k, "trunc": args.trunc}
        result = {"polynomial": poly.to_text(), "betti": _coeff_row(poly)}
        _emit_json(_envelope(command, result, _PROVENANCE[args.space], None))
    return EXIT_OK


# -- relations -----------------------------------------------------------------


def _relation_poly(args):
    idx = args.indices
    if args.relation == "zeta":
        if len(idx) != 1:
            raise ParameterError("zeta takes one index r")
        return rings.zeta_rec(idx[0])
    if args.relation == "zeta-rs":
        if len(idx) not in (2, 3):
            raise ParameterError("zeta-rs takes indices r s [t]")
        exp = rings.expand_zeta_rs(sum(idx[:2]) + 1)
        if not exp.is_polynomial(idx[0], idx[1]):
            raise ParameterError(
                f"zeta_({idx[0]},{idx[1]}) is not polynomial in beta")
        if len(idx) == 2:
            return exp.zeta(idx[0], idx[1])
        return exp.zeta_rst(idx[0], idx[1], idx[2])
    if len(idx) != 3:
        raise ParameterError("rho takes indices r s t")
    return rings.rho(idx[0], idx[1], idx[2], args.genus)


def _cmd_relations(args):
    try:
        if args.genus < 2:
            raise ParameterError("genus must be at least 2")
        if any(i < 0 for i in args.indices):
            raise ParameterError("indices must be non-negative")
        poly = _relation_poly(args)
    except (ParameterError, AlgebraError) as exc:
        print(f"higgsc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "table":
        sys.stdout.write(poly.to_text() + "\n")
    elif args.format == "latex":
        sys.stdout.write(_latex_poly(poly) + r" \\" + "\n")
    else:
        command = {"subcommand": "relations", "relation": args.relation,
                   "genus": args.genus, "indices": args.indices}
        result = {"polynomial": poly.to_text()}
        prov = {"zeta": ["zagier-recursion"],
                "zeta-rs": ["zagier-generating-function"],
                "rho": ["rho-binomial-formula"]}[args.relation]
        _emit_json(_envelope(command, result, prov, None))
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def _progress_printer():
    def cb(degree, pairs, basis_size):
        print(f"  degree {degree}, {pairs} pairs remaining, "
              f"basis size {basis_size}", file=sys.stderr)
    return cb


def _verify_newstead(g, args, cache):
    """beta^g vanishing and the first relation, certified by normal forms."""
    ig = rings.build_ig(g)
    gb_i = ig.groebner(time_limit=args.time_limit, cache=cache)
    rg = rings.build_r(g)
    gb_r = rg.groebner(time_limit=args.time_limit, cache=cache)
    first = rings.rho(1, g - 1, 0, g)
    checks = {
        "betaG-in-Ig": normal_form(rings.abg(beta=g), gb_i).in_ideal,
        "betaG-zero-in-Rg": normal_form(rings.abg(beta=g), gb_r).in_ideal,
        "betaGminus1-survives-Ig":
            not normal_form(rings.abg(beta=g - 1), gb_i).in_ideal,
        "betaGminus1-survives-Rg":
            not normal_form(rings.abg(beta=g - 1), gb_r).in_ideal,
        "first-relation-in-Ig": normal_form(first, gb_i).in_ideal,
        "first-relation-in-Rg": normal_form(first, gb_r).in_ideal,
    }
    status = "verified" if all(checks.values()) else "falsified"
    report = {"check": "newstead", "genus": g, "status": status,
              "subchecks": checks}
    if status == "falsified":
        report["witness"] = sorted(k for k, v in checks.items() if not v)
    return report


def _verify_rho_membership(g, args, cache):
    """Every relation of R_g lies in the Zagier ideal I_g."""
    failures = []
    window = rings.rho_window(g, 3 * g)
    for (r, s, t) in window:
        cert = rings.rho_in_ig(r, s, t, g, cache=cache)
        if not cert.in_ideal:
            failures.append({"indices": [r, s, t],
                             "remainder": cert.remainder.to_text()})
    report = {"check": "rho-membership", "genus": g,
              "tuplesChecked": len(window),
              "status": "verified" if not failures else "falsified"}
    if failures:
        report["witness"] = failures
    return report


def _verify_vanishing_lemma(g, args):
    if args.grid:
        if len(args.grid) != 4:
            raise ParameterError("--grid takes four bounds: nMax kMax mMax lMax")
        n_max, k_max, m_max, l_max = args.grid
    else:
        n_max, k_max, m_max, l_max = 2 * g - 2, 2 * g, 2 * g, 2 * g
    checked = 0
    failures = []
    for n in range(n_max + 1):
        for k in range(k_max + 1):
            for mm in range(m_max + 1):
                for l in range(l_max + 1):
                    if not symprod.vanishing_lemma_hypotheses(n, k, mm, l, g):
                        continue
                    checked += 1
                    if not symprod.vanishing_lemma_check(n, k, mm, l, g):
                        failures.append([n, k, mm, l])
    report = {"check": "vanishing-lemma", "genus": g,
              "grid": [n_max, k_max, m_max, l_max], "tuplesChecked": checked,
              "status": "verified" if not failures else "falsified"}
    if failures:
        report["witness"] = failures
    return report


def _verify_beta_g(g, args):
    """Restriction of beta^g to every downward-flow stratum vanishes."""
    failures = []
    for d in range(1, g):
        if not symprod.beta_g_restriction_check(g, d):
            failures.append({"d": d, "check": "restriction"})
        if not rings.generating_function_oracle(g, d):
            failures.append({"d": d, "check": "generating-function"})
    report = {"check": "beta-g", "genus": g, "strata": list(range(1, g)),
              "status": "verified" if not failures else "falsified"}
    if failures:
        report["witness"] = failures
    return report


def _verify_identities(g, args):
    results = identity_suite(g)
    report = {"check": "identities", "genus": g,
              "identities": [{"name": r.name, "passed": r.passed,
                              "detail": r.detail} for r in results],
              "status": "verified" if all(r.passed for r in results)
              else "falsified"}
    if report["status"] == "falsified":
        report["witness"] = [r.name for r in results if not r.passed]
    return report


_VERIFY_ORDER = ("presentation", "n-presentation", "newstead",
                 "rho-membership", "vanishing-lemma", "beta-g",
                 "dirac", "identities")


def _run_check(name, g, args, cache, progress):
    if name == "presentation":
        report = rings.verify_presentation(
            g, time_limit=args.time_limit, cache=cache,
            max_cap=args.max_cap, progress=progress)
        report["check"] = "presentation"
        return report
    if name == "n-presentation":
        report = rings.verify_n_presentation(
            g, time_limit=args.time_limit, cache=cache, progress=progress)
        report["check"] = "n-presentation"
        return report
    if name == "newstead":
        return _verify_newstead(g, args, cache)
    if name == "rho-membership":
        return _verify_rho_membership(g, args, cache)
    if name == "vanishing-lemma":
        return _verify_vanishing_lemma(g, args)
    if name == "beta-g":
        return _verify_beta_g(g, args)
    if name == "dirac":
        report = rings.dirac_report(g)
        report["check"] = "dirac"
        report["genus"] = g
        return report
    return _verify_identities(g, args)


def _cmd_verify(args):
    cache = GroebnerCache(args.cache_dir) if not args.no_cache else None
    progress = _progress_printer() if args.progress else None
    start = time.monotonic()
    try:
        if args.check == "all":
            reports = {}
            for name in _VERIFY_ORDER:
                reports[name] = _run_check(name, args.genus, args, cache,
                                           progress)
            statuses = {r["status"] for r in reports.values()}
            status = ("resource-limited" if "resource-limited" in statuses
                      else "falsified" if "falsified" in statuses
                      else "verified")
            result = {"status": status, "checks": reports}
        else:
            result = _run_check(args.check, args.genus, args, cache, progress)
            status = result["status"]
    except ResourceLimit as rl:
        result = {"status": "resource-limited", "message": str(rl),
                  "degreeReached": rl.degree_reached,
                  "pairsRemaining": rl.pairs_remaining}
        status = "resource-limited"
    except (ParameterError, AlgebraError) as exc:
        print(f"higgsc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.monotonic() - start
    timing = {"wallSeconds": round(elapsed, 3)} if args.timing else None
    if not args.timing:
        result = _strip_timing(result)
    command = {"subcommand": "verify", "check": args.check,
               "genus": args.genus}
    _emit_json(_envelope(command, result, ["verification-suite"], timing))
    if status == "verified":
        return EXIT_OK
    if status == "resource-limited":
        return EXIT_LIMIT
    return EXIT_FALSIFIED


# -- cache ---------------------------------------------------------------------


def _cmd_cache(args):
    cache = GroebnerCache(args.cache_dir)
    try:
        if args.action == "list":
            result = {"directory": cache.directory,
                      "entries": [{"name": n, "bytes": b}
                                  for n, b in cache.list_entries()]}
        elif args.action == "clear":
            result = {"directory": cache.directory,
                      "removed": cache.clear()}
        else:
            result = cache.stat()
    except OSError as exc:
        print(f"higgsc: cache error at {cache.directory}: {exc}",
              file=sys.stderr)
        return EXIT_FALSIFIED
    command = {"subcommand": "cache", "action": args.action}
    _emit_json(_envelope(command, result, [], None))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="higgsc",
        description="Exact Betti numbers and cohomology-ring verifications "
                    "for rank-2 Higgs bundle moduli spaces.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("poincare", help="Poincare polynomial of a space")
    p.add_argument("--space", required=True,
                   choices=[s.value for s in Space])
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trunc", type=int)
    p.add_argument("--format", choices=["json", "table", "latex"],
                   default="json")
    p.set_defaults(func=_cmd_poincare)

    r = sub.add_parser("relations", help="relation polynomials")
    r.add_argument("relation", choices=["zeta", "zeta-rs", "rho"])
    r.add_argument("--genus", type=int, required=True)
    r.add_argument("indices", type=int, nargs="*")
    r.add_argument("--format", choices=["json", "table", "latex"],
                   default="json")
    r.set_defaults(func=_cmd_relations)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("check", choices=list(_VERIFY_ORDER) + ["all"])
    v.add_argument("--genus", type=int, required=True)
    v.add_argument("--grid", type=int, nargs="*",
                   help="vanishing-lemma bounds: nMax kMax mMax lMax")
    v.add_argument("--max-cap", type=int, default=None,
                   help="largest relation-window escalation for presentation")
    v.add_argument("--jobs", type=int, default=1,
                   help="upper bound on internal parallelism")
    v.add_argument("--time-limit", type=float, default=None,
                   help="wall-time limit in seconds for Groebner runs")
    v.add_argument("--cache-dir", default=None,
                   help=f"Groebner cache directory "
                        f"(default {default_cache_dir()})")
    v.add_argument("--no-cache", action="store_true")
    v.add_argument("--progress", action="store_true",
                   help="stream Groebner progress to stderr")
    v.add_argument("--timing", action="store_true",
                   help="include wall-clock timings in the output")
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("cache", help="cache administration")
    c.add_argument("action", choices=["list", "clear", "stat"])
    c.add_argument("--cache-dir", default=None)
    c.set_defaults(func=_cmd_cache)
    return parser


def _split_relations_argv(argv):
    """Pull index tokens out of a ``relations`` invocation.

    argparse cannot match a trailing positional list once flags have been
    consumed, so the integer indices are separated out before parsing and
    reattached afterwards.  A bare ``--`` marks everything after it as index.
    """
    pos = argv.index("relations")
    kept = list(argv[:pos + 1])
    indices = []
    tokens = argv[pos + 1:]
    i = 0
    relation_seen = False
    only_positional = False
    while i < len(tokens):
        tok = tokens[i]
        if only_positional:
            indices.append(tok)
        elif tok == "--":
            only_positional = True
        elif tok in ("--genus", "--format"):
            kept += tokens[i:i + 2]
            i += 2
            continue
        elif tok.startswith("--") or tok == "-h":
            kept.append(tok)
        elif not relation_seen:
            kept.append(tok)
            relation_seen = True
        else:
            indices.append(tok)
        i += 1
    return kept, indices


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    index_tokens = []
    if "relations" in argv:
        argv, index_tokens = _split_relations_argv(argv)
    args = parser.parse_args(argv)
    if index_tokens:
        if not all(tok.lstrip("-").isdigit() for tok in index_tokens):
            parser.error("indices must be integers, got: "
                         + " ".join(index_tokens))
        args.indices = list(args.indices) + [int(t) for t in index_tokens]
    if getattr(args, "genus", 2) < 2:
        print("higgsc: genus must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
