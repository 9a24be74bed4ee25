"""Command-line front end.

Exit status: 0 on success, 1 when the mathematics says no (a refused
certificate, a failed cross-check, a non-empty failure list), 2 on errors.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
import json
import logging
import os
import sys

from . import cache
from .arith import kronecker, primes_in

log = logging.getLogger("cmcongruence")

CONFIG_KEYS = {"order": int, "precision_margin": int, "oracle_bound": int, "dmax": int, "cache_dir": str, "workers": int}


@dataclass
class Config:
    order: int = 200
    precision_margin: int = 64
    oracle_bound: int = 60
    dmax: int | None = None
    cache_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        for name in ("order", "precision_margin", "oracle_bound", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"config value {name} must be positive")
        if self.dmax is not None and self.dmax <= 0:
            raise ValueError("config value dmax must be positive")


def load_config(path: str | None) -> Config:
    """Read a key=value file; blank lines and # comments are skipped."""
    values = {}
    if path:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, val = (s.strip() for s in line.split("=", 1))
                if key not in CONFIG_KEYS:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = CONFIG_KEYS[key](val)
    env = os.environ.get(cache.ENV_VAR)
    if env:
        values["cache_dir"] = env
    return Config(**values)


# ---------------------------------------------------------------------------
# output


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print(text)


def _series_text(s, count: int = 12) -> str:
    hi = min(s.order, s.val + count - 1)
    terms = [f"{c}*q^{n}" for n, c in zip(range(s.val, hi + 1), s.coefficients(s.val, hi)) if c]
    return " + ".join(terms) + f" + O(q^{s.order + 1})"


# ---------------------------------------------------------------------------
# subcommands


def cmd_jseries(args, cfg):
    from .qseries import j_series, lehner_violations

    N = args.order or cfg.order
    s = j_series(N, args.mod)
    payload = {"order": N, "modulus": args.mod, "valuation": s.val, "coeffs": [str(c) for c in s.coeffs]}
    text = _series_text(s)
    status = 0
    if args.lehner:
        bad = lehner_violations(args.lehner)
        payload["lehner_violations"] = bad
        text += f"\nLehner congruences through n={args.lehner}: {'ok' if not bad else bad}"
        status = 1 if bad else 0
    _emit(args, payload, text)
    return status


def cmd_hcp(args, cfg):
    from .hilbert import hilbert_class_poly_with_residual, precision_estimate, _hcp_memo

    if args.residual:
        P, worst, bits = hilbert_class_poly_with_residual(args.D, precision_estimate(args.D) - 64 + cfg.precision_margin)
    else:
        P, worst, bits = _hcp_memo(args.D), None, None
    payload = {"D": args.D, "h": P.degree, "coeffs": [str(c) for c in P.coeffs]}
    if worst is not None:
        payload.update(residual=worst, precision_bits=bits)
    text = str(P) if worst is None else f"{P}\nresidual {worst:.3g} at {bits} bits"
    _emit(args, payload, text)
    return 0


def cmd_ssp(args, cfg):
    from .supersingular import ss_polynomials, supersingular_j_oracle

    if args.range:
        lo, hi = args.range
        rows, bad = [], []
        for p in primes_in(max(lo, 5), hi):
            d = ss_polynomials(p)
            ok = d.s_tilde.degree == p // 12
            if p <= min(args.oracle or 0, cfg.oracle_bound):
                ok = ok and set(d.roots) == supersingular_j_oracle(p, cfg.oracle_bound)
            rows.append({"p": p, "deg": d.s_tilde.degree, "ok": ok})
            if not ok:
                bad.append(p)
        _emit(args, {"rows": rows, "failures": bad}, f"{len(rows)} primes checked, failures: {bad or 'none'}")
        return 1 if bad else 0
    d = ss_polynomials(args.p)
    payload = {
        "p": args.p,
        "S": [str(c) for c in d.s.coeffs],
        "S_tilde": [str(c) for c in d.s_tilde.coeffs],
        "e0": d.e0,
        "e1": d.e1,
        "roots": [[r.a, r.b] for r in d.roots],
    }
    roots = ", ".join(str(r) for r in d.roots)
    _emit(args, payload, f"S_{args.p} = {d.s}\nS~_{args.p} = {d.s_tilde}\nsupersingular j: {roots}")
    return 0


def cmd_up(args, cfg):
    from .congruence import hecke_identity, up_reduction
    from .hilbert import hilbert_class_poly

    N = args.order or cfg.order
    if args.identity:
        lhs, t0, vp, G = hecke_identity(hilbert_class_poly(args.D), args.p, N)
        ok = lhs == t0 - vp
        _emit(args, {"D": args.D, "p": args.p, "order": N, "identity": ok, "T0_degree": G.degree},
              f"p U = T0 - V through q^{N}: {ok}")
        return 0 if ok else 1
    s = up_reduction(args.D, args.p, N)
    _emit(args, {"D": args.D, "p": args.p, **s.to_json()}, _series_text(s))
    return 0


def cmd_certify(args, cfg):
    from .congruence import certify_congruence

    cert = certify_congruence(args.D, args.p, args.verify)
    if cert.certified:
        text = f"certified: H_{args.D}(j) | U({args.p}) = {cert.G} (mod {args.p}), checked through q^{cert.verified_through}"
    else:
        text = f"refused: S~_{args.p}^2 does not divide H_{args.D} mod {args.p}\nU({args.p}) series: {_series_text(cert.series)}"
    _emit(args, cert.to_json(), text)
    return 0 if cert.certified else 1


def cmd_survey(args, cfg):
    from .congruence import survey_omega, uniform_range_check

    if args.below:
        tested, failures = uniform_range_check(args.below)
        payload = {"below": args.below, "tested": tested, "failures": [f.__dict__ for f in failures]}
        text = "\n".join([f"{tested} pairs tested, {len(failures)} failures"] + [f"  D={f.D} p={f.p}: {f.reason}" for f in failures])
        _emit(args, payload, text)
        return 1 if failures else 0
    if args.p is None:
        raise ValueError("survey needs -p or --below")
    table = survey_omega(args.p, args.dmax or cfg.dmax, workers=args.workers or cfg.workers)
    lines = [f"p={table.p} Dmax={table.dmax}: {table.total} members, {table.count('constant')} constant, "
             f"{table.count('polynomial')} polynomial, {table.count('none')} without a congruence"]
    lines += [f"  D={r.D:6d} h={r.h:3d} ({-r.D}/p)={r.kronecker:2d} {r.outcome}" for r in table.rows]
    _emit(args, table.to_json(), "\n".join(lines))
    return 0


def cmd_scan(args, cfg):
    from .congruence import decile_densities, scan_surjectivity

    exc = scan_surjectivity(args.p, args.t, args.dmin, args.dmax)
    dens = decile_densities(args.p, exc, args.dmin, args.dmax)
    tail = dens[1:]
    monotone = all(a >= b for a, b in zip(tail, tail[1:]))
    payload = {"p": args.p, "t": args.t, "dmin": args.dmin, "dmax": args.dmax, "exceptions": exc,
               "decile_density": dens, "non_increasing_after_first": monotone}
    text = f"{len(exc)} exceptions: {exc}\ndecile densities: {[round(x, 4) for x in dens]}\nnon-increasing after first decile: {monotone}"
    _emit(args, payload, text)
    return 0


def cmd_delta(args, cfg):
    import random

    from .koike import delta_p, verify_koike_corollary

    rat = delta_p(args.p)
    payload = rat.to_json()
    text = f"delta_{args.p} = ({rat.numerator}) / ({rat.denominator})"
    status = 0
    if args.corollary:
        rng = random.Random(args.seed)
        results = []
        for _ in range(args.corollary):
            F = [rng.randint(-50, 50) for _ in range(rng.randint(1, 3) + 1)]
            results.append({"F": F, "holds": verify_koike_corollary(F, args.p, args.order or 100)})
        payload["corollary"] = results
        ok = all(r["holds"] for r in results)
        text += f"\ncorollary on {len(results)} random F: {'holds' if ok else 'FAILS'}"
        status = 0 if ok else 1
    _emit(args, payload, text)
    return status


def cmd_theta(args, cfg):
    from fractions import Fraction

    from .classfield import eisenstein_hp, fundamental_discriminants
    from .quaternion import embedding_numbers, growth_slope, setup, theta_for

    S = setup(args.p)
    theta = theta_for(args.p, args.M)
    payload = {
        **theta.to_json(),
        "algebra": [S.algebra.a, S.algebra.b],
        "order_basis": [[str(c) for c in v] for v in S.order.basis],
        "gram": [[str(c) for c in r] for r in S.lattice.gram],
        "gram_det": str(S.lattice.gram_det),
    }
    lines = [f"B = ({-S.algebra.a}, {-S.algebra.b}), w_R = {S.w_R}, Gram of L = {payload['gram']}, det {payload['gram_det']}",
             "a_R: " + " ".join(map(str, theta.coeffs[: min(len(theta.coeffs), 40)]))]
    status = 0
    if args.embeddings:
        emb = embedding_numbers(theta)
        payload["embedding_numbers"] = {str(m): v for m, v in emb.items()}
        lines.append("h(O_m,R): " + " ".join(f"{m}:{v}" for m, v in emb.items() if v))
    if args.eisenstein:
        bad = [D for D in fundamental_discriminants(3, args.M)
               if kronecker(-D, args.p) != 1 and theta[D] != Fraction(24, args.p - 1) * eisenstein_hp(D, args.p)]
        payload["eisenstein_mismatches"] = bad
        lines.append(f"a_R(D) = 24/(p-1) H_p(D) for non-split fundamental D <= {args.M}: {'yes' if not bad else bad}")
        status = 1 if bad else 0
    if args.slope:
        slope, n = growth_slope(args.p, args.M)
        payload["cusp_slope"] = slope
        payload["cusp_points"] = n
        lines.append(f"log|c_L(D)| vs log D slope over D <= {args.M}: {slope:.4f} ({n} points)")
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_crosscheck(args, cfg):
    from .classfield import fundamental_discriminants
    from .quaternion import CrossCheckFailed, deuring_cross_check

    if args.D is not None:
        Ds = [args.D]
    else:
        Ds = [D for D in fundamental_discriminants(3, args.dmax) if kronecker(-D, args.p) != 1]
        if args.inert:
            Ds = [D for D in Ds if kronecker(-D, args.p) == -1]
    reports, failures = [], []
    for D in Ds:
        try:
            reports.append(deuring_cross_check(D, args.p).to_json())
        except CrossCheckFailed as exc:
            failures.append({"D": D, "error": str(exc)})
    lines = [f"D={r['D']}: h={r['h']} h(O_D,R)={r['h_O_R']} eps={r['epsilon']} multiplicity={r['per_curve_multiplicity'] or r['multiplicity_total']}"
             for r in reports]
    lines += [f"D={f['D']}: FAILED {f['error']}" for f in failures]
    _emit(args, {"p": args.p, "reports": reports, "failures": failures}, "\n".join(lines))
    return 1 if failures else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--cache-dir", help=f"disk cache directory (overrides ${cache.ENV_VAR})")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="cmcongruence", description="Congruences for Hilbert class polynomials under U(p).")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("jseries", cmd_jseries, "q-expansion of j")
    sp.add_argument("-N", "--order", type=int)
    sp.add_argument("--mod", type=int)
    sp.add_argument("--lehner", type=int, metavar="NMAX", help="check Lehner congruences for n <= NMAX")

    sp = add("hcp", cmd_hcp, "Hilbert class polynomial H_D")
    sp.add_argument("-D", type=int, required=True)
    sp.add_argument("--residual", action="store_true", help="recompute and report the rounding residual")

    sp = add("ssp", cmd_ssp, "supersingular polynomial S_p")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("-p", type=int)
    g.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--oracle", type=int, metavar="PMAX", help="compare roots with point counting for p <= PMAX")

    sp = add("up", cmd_up, "H_D(j) | U(p) mod p")
    sp.add_argument("-D", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-N", "--order", type=int)
    sp.add_argument("--identity", action="store_true", help="check p U(p) = T0(p) - V(p) over Z instead")

    sp = add("certify", cmd_certify, "certify H_D(j) | U(p) = G_p(j) mod p")
    sp.add_argument("-D", type=int, required=True)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--verify", type=int, default=50, help="extra coefficients compared")

    sp = add("survey", cmd_survey, "certify every member of Omega_p")
    sp.add_argument("-p", type=int)
    sp.add_argument("--dmax", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--below", type=int, metavar="DLIMIT", help="run the uniform-range check for D < DLIMIT over all odd p")

    sp = add("scan", cmd_scan, "discriminants where S_p^t fails to divide H_D")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-t", type=int, default=2)
    sp.add_argument("--dmin", type=int, default=1)
    sp.add_argument("--dmax", type=int, default=2000)

    sp = add("delta", cmd_delta, "Koike's rational function delta_p")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--corollary", type=int, metavar="COUNT", help="test the mod p^2 corollary on COUNT random F")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-N", "--order", type=int)

    sp = add("theta", cmd_theta, "theta coefficients of the trace-zero lattice")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-M", type=int, default=100)
    sp.add_argument("--embeddings", action="store_true")
    sp.add_argument("--eisenstein", action="store_true", help="compare with 24/(p-1) H_p(D)")
    sp.add_argument("--slope", action="store_true", help="growth slope of the cusp part")

    sp = add("crosscheck", cmd_crosscheck, "compare root multiplicities with embedding numbers")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-D", type=int)
    sp.add_argument("--dmax", type=int, default=300)
    sp.add_argument("--inert", action="store_true", help="only D with (-D/p) = -1")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        if args.cache_dir:
            cfg.cache_dir = args.cache_dir
        if cfg.cache_dir:
            cache.set_default_cache(cfg.cache_dir)
        return args.func(args, cfg)
    except (ValueError, ArithmeticError, OSError, AssertionError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
