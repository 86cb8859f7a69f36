"""Command-line front end: parameter intake from flags and/or a flat
key=value config file, batch evaluation, CSV/JSON emission, and the
verification suite.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 numeric
non-convergence.
"""

import argparse
import json
import math
import os
import sys


def _setup_threads():
    n = os.environ.get("MATTIS_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(rows, meta, fmt, out):
    """rows: list of dicts (uniform keys); meta: resolved config dict."""
    if fmt == "json":
        text = json.dumps(_jsonable({"meta": meta, "rows": rows}), indent=2,
                          default=_fmt) + "\n"
    else:
        cols = list(rows[0].keys()) if rows else []
        lines = ["# " + "; ".join(f"{k}={_fmt(v)}" for k, v in meta.items())]
        lines.append(",".join(cols))
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in cols))
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_config(path):
    cfg = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.strip()!r}")
            key, val = line.split("=", 1)
            cfg[key.strip()] = val.strip()
    return cfg


def _parse_beta(text):
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


_PARAM_KEYS = {
    "gamma1": float, "gamma2": float, "vf": float,
    "a_tilde": float, "l_over_a": int,
}


def _resolve(args, extra_keys=()):
    """Merge config-file values and flags (flags win); returns a flat dict
    of resolved settings."""
    cfg = _read_config(args.config) if args.config else {}
    out = {}
    keys = dict(_PARAM_KEYS)
    keys.update({"beta": _parse_beta, "epsilon": float})
    keys.update(extra_keys)
    for key, conv in keys.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = conv(flag) if isinstance(flag, str) else flag
        elif key in cfg:
            out[key] = conv(cfg[key])
    return out, cfg


def _make_params(cfg):
    from .core import ModelParams, validate_params
    p = ModelParams(v_F=cfg.get("vf", 1.0),
                    gamma1=cfg.get("gamma1", 0.0),
                    gamma2=cfg.get("gamma2", 0.0),
                    a_tilde=cfg.get("a_tilde", 1.0),
                    l_over_a=cfg.get("l_over_a", 11))
    problems = validate_params(p)
    if problems:
        raise ValueError("; ".join(problems))
    return p


def cmd_dispersion(args):
    import numpy as np
    from .core import omega, omega_tilde
    cfg, raw = _resolve(args, {"pmag": float, "ntheta": int})
    p = _make_params(cfg)
    pmag = cfg.get("pmag", 0.5 * p.p_cut)
    ntheta = cfg.get("ntheta", 91)
    rows = []
    for th in np.linspace(0.0, math.pi / 2.0, ntheta, endpoint=False):
        pp, pm = pmag * math.cos(th), pmag * math.sin(th)
        oms = sorted((omega(1, pp, pm, p), omega(-1, pp, pm, p)),
                     reverse=True)
        omt = sorted((omega_tilde(1, pp, pm, p),
                      omega_tilde(-1, pp, pm, p)), reverse=True)
        scale = p.v_F * pmag
        rows.append({"theta": float(th),
                     "omega_plus_over_vF_p": oms[0] / scale,
                     "omega_minus_over_vF_p": oms[1] / scale,
                     "omega_tilde_over_vF_p": omt[0] / scale,
                     "omega_tilde_minus_over_vF_p": omt[1] / scale})
    meta = dict(cfg, subcommand="dispersion", pmag=pmag, ntheta=ntheta,
                units="theta in radians; frequencies over v_F*|p|")
    _emit(rows, meta, args.format, args.out)
    return 0


def cmd_free_energy(args):
    from . import thermo
    from .core import ground_state_energy
    cfg, raw = _resolve(args, {"mode": str, "zq_mode": str})
    p = _make_params(cfg)
    beta = cfg.get("beta", 10.0)
    mode = cfg.get("mode", "lattice-sum")
    zq = cfg.get("zq_mode", "closed")
    e0 = ground_state_energy(p)
    target = thermo.qft_free_energy_density(p, beta)
    if mode == "lattice-sum":
        ob = thermo.boson_free_energy(p, beta)
        oq = thermo.zero_mode_free_energy(p, beta, mode=zq)
        scaled = p.a_tilde * (ob + oq) / p.L ** 2
        row = {"omega_B": ob, "omega_Q": oq, "E0": e0,
               "scaled_total": scaled, "qft_target": target}
    elif mode == "split-integral":
        sp = thermo.free_energy_split(p, beta)
        row = {"omega_less": sp.less, "omega_greater": sp.greater,
               "E0": e0, "scaled_total": p.a_tilde * sp.total,
               "qft_target": target}
    elif mode == "qft":
        row = {"E0": e0, "scaled_total": target, "qft_target": target}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    meta = dict(cfg, subcommand="free-energy", beta=beta, mode=mode,
                units="energies in v_F/a_tilde units")
    _emit([row], meta, args.format, args.out)
    return 0


def _neville(xs, vals):
    tbl = list(vals)
    for m in range(1, len(xs)):
        for i in range(len(xs) - m):
            tbl[i] = tbl[i + 1] + (tbl[i + 1] - tbl[i]) * xs[i + m] \
                / (xs[i] - xs[i + m])
    return tbl[0]


def cmd_correlator(args):
    from . import correlators, qft
    cfg, raw = _resolve(args, {
        "submode": str, "r1": int, "s1": int, "r2": int, "s2": int,
        "x": float, "t": float, "l0": float, "eps_seq": str})
    p = _make_params(cfg)
    beta = cfg.get("beta", math.inf)
    sub = cfg.get("submode", "density")
    r1, s1 = cfg.get("r1", 1), cfg.get("s1", 1)
    r2, s2 = cfg.get("r2", 1), cfg.get("s2", 1)
    x, t = cfg.get("x", 1.0), cfg.get("t", 0.0)
    eps = cfg.get("epsilon", 0.1)
    seq = [float(e) for e in cfg["eps_seq"].split(",")] \
        if "eps_seq" in cfg else [eps]

    def one(e):
        if sub == "density":
            xp, xm = (x, 0.0) if s1 == 1 else (0.0, x)
            v = correlators.density_two_point(
                p, beta, (r1, s1), (r2, s2), xp, xm, t, e)
            return v, {"delta_transverse": "kronecker",
                       "flavor_diagonal": s1 == s2}
        if sub == "fermion2":
            xp, xm = (x, 0.0) if s1 == 1 else (0.0, x)
            res = correlators.fermion_npoint(
                p, beta, [(1, r1, s1, xp, xm, t), (-1, r2, s2, 0, 0, 0.0)], e)
            return res.value, {"klein": res.klein}
        if sub == "fermionN":
            ins = []
            for item in raw["insertions"].split(";"):
                q, r, s, xp, xm, ti = item.split(",")
                ins.append((int(q), int(r), int(s),
                            float(xp), float(xm), float(ti)))
            res = correlators.fermion_npoint(p, beta, ins, e)
            return res.value, {"klein": res.klein}
        if sub == "qft2":
            l0 = cfg.get("l0", 1.0)
            res = qft.fermion2pt_qft(p, r1, s1, x, t, l0, e)
            return res.value, {"delta_transverse": res.delta_transverse,
                               "flavor_diagonal": res.flavor_diagonal}
        raise ValueError(f"unknown submode {sub!r}")

    rows = []
    vals = []
    extra = {}
    for e in seq:
        v, extra = one(e)
        vals.append(v)
        rows.append(dict({"epsilon": e, "real": v.real, "imag": v.imag},
                         **extra))
    if len(seq) > 1:
        ex = _neville(seq, vals)
        for row in rows:
            row["extrap_real"], row["extrap_imag"] = ex.real, ex.imag
    meta = dict(cfg, subcommand="correlator", beta=beta, submode=sub,
                units="correlators in lattice units (a_tilde=length)")
    _emit(rows, meta, args.format, args.out)
    return 0


def cmd_cconst(args):
    import numpy as np
    from . import qft
    cfg, raw = _resolve(args, {"ngamma": int})
    n = cfg.get("ngamma", 0)
    rows = []
    if n:
        g1 = cfg.get("gamma1", 0.0)
        g2 = cfg.get("gamma2", g1)
        for g in np.linspace(-0.45, 0.9, n):
            ra = qft.c_constant(float(g), float(g))
            rows.append({"gamma": float(g), "C": ra.value,
                         "err_estimate": ra.err_estimate})
    else:
        g1 = cfg.get("gamma1", 0.0)
        g2 = cfg.get("gamma2", 0.0)
        ra = qft.c_constant(g1, g2, scheme="adaptive")
        rg = qft.c_constant(g1, g2, scheme="gauss")
        rows.append({"gamma1": g1, "gamma2": g2, "C": ra.value,
                     "err_estimate": ra.err_estimate,
                     "cross_scheme_diff": abs(ra.value - rg.value)})
    meta = dict(cfg, subcommand="cconst")
    _emit(rows, meta, args.format, args.out)
    return 0


def cmd_verify(args):
    from . import verify
    lines = []

    def report(line):
        lines.append(line)
        print(line)

    ok = verify.run_all(report=report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="mattis",
        description="Spectrum, free energy and correlators of an exactly "
                    "solvable 2+1D coupled-chain fermion model.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--gamma1", type=float)
        sp.add_argument("--gamma2", type=float)
        sp.add_argument("--vf", type=float)
        sp.add_argument("--a-tilde", dest="a_tilde", type=float)
        sp.add_argument("--l-over-a", dest="l_over_a", type=int)
        sp.add_argument("--beta", type=_parse_beta)
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out")
        sp.add_argument("--config")

    sp = sub.add_parser("dispersion", help="angular dispersion sweep")
    common(sp)
    sp.add_argument("--pmag", type=float)
    sp.add_argument("--ntheta", type=int)
    sp.set_defaults(func=cmd_dispersion)

    sp = sub.add_parser("free-energy", help="free energy contributions")
    common(sp)
    sp.add_argument("--mode", choices=("lattice-sum", "split-integral",
                                       "qft"))
    sp.add_argument("--zq-mode", dest="zq_mode",
                    choices=("closed", "gaussian", "exact"))
    sp.set_defaults(func=cmd_free_energy)

    sp = sub.add_parser("correlator", help="correlation functions")
    common(sp)
    sp.add_argument("--submode", choices=("density", "fermion2", "fermionN",
                                          "qft2"))
    sp.add_argument("--r1", type=int)
    sp.add_argument("--s1", type=int)
    sp.add_argument("--r2", type=int)
    sp.add_argument("--s2", type=int)
    sp.add_argument("--x", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--l0", type=float)
    sp.add_argument("--eps-seq", dest="eps_seq")
    sp.set_defaults(func=cmd_correlator)

    sp = sub.add_parser("cconst", help="multiplicative constant C")
    common(sp)
    sp.add_argument("--ngamma", type=int)
    sp.set_defaults(func=cmd_cconst)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    _setup_threads()
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
