# Command-line front end: config ingestion, subcommand dispatch,
# deterministic CSV/JSON artifacts and a reproducibility manifest.

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time

from . import __version__
from .config import ConfigInvalid, load_config, param, param_complex
from .sft import (InadmissibleWord, PeriodicMatrix, ReducibleMatrix,
                  SubshiftError, ZeroRowOrColumn)
from .potentials import PotentialError
from .transfer import (NoConvergence, TransferError, normalize, pressure,
                       rpf, solve_pressure_root, solve_s_for_z, combine,
                       equilibrium_integral)
from .zeta import (ZetaError, eta_g, residue_check, ruelle_identity_check,
                   zeta_partial, zn_exact)
from .orbits import (CatalogBudget, OrbitError, build_catalog,
                     counting_ratio_series, delta_schedule,
                     exponential_window_report, window_series)
from .decay import (ConeViolation, DecayError, NonPositive, RegimeSpec,
                    B_LEADING, LATTICE_CONTROL, lasota_yorke_check,
                    lattice_diagnostic, measure_decay, spectral_radius,
                    thm6_regime_sweep)

EXIT_CODES = [
    (ConfigInvalid, 2),
    (ZeroRowOrColumn, 10),
    (ReducibleMatrix, 11),
    (PeriodicMatrix, 12),
    (InadmissibleWord, 13),
    (PotentialError, 14),
    (NoConvergence, 15),
    (ConeViolation, 21),
    (NonPositive, 22),
    (CatalogBudget, 19),
    (OrbitError, 18),
    (ZetaError, 17),
    (DecayError, 20),
    (TransferError, 16),
    (SubshiftError, 3),
]


def _fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow([_fmt(x) for x in row])


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def _word_str(w):
    return ",".join(str(a) for a in w) if any(a > 9 for a in w) else \
        "".join(str(a) for a in w)


def write_manifest(outdir, subcommand, config_text, seed, wall):
    snap = os.path.join(outdir, "config.snapshot.yaml")
    with open(snap, "w") as fh:
        fh.write(config_text)
    sha = hashlib.sha256(config_text.encode()).hexdigest()
    import numpy
    import scipy
    with open(os.path.join(outdir, "manifest.txt"), "w") as fh:
        fh.write("subcommand: %s\n" % subcommand)
        fh.write("config_sha256: %s\n" % sha)
        fh.write("config_snapshot: config.snapshot.yaml\n")
        fh.write("seed: %d\n" % seed)
        fh.write("shiftlab_version: %s\n" % __version__)
        fh.write("numpy_version: %s\n" % numpy.__version__)
        fh.write("scipy_version: %s\n" % scipy.__version__)
        fh.write("wall_time_s: %.3f\n" % wall)


def _resolve_fu(cfg, depth):
    if cfg.f_u is not None:
        return cfg.f_u
    root = solve_pressure_root(cfg.spec, cfg.f, cfg.tau, depth=depth)
    return normalize(cfg.spec, cfg.f, cfg.tau, root, depth=depth).potential


# --- subcommand bodies -----------------------------------------------------


def cmd_pressure(cfg, out, depth):
    p = pressure(cfg.spec, cfg.f, depth=depth)
    print("%.10f" % p)
    write_json(os.path.join(out, "pressure.json"),
               {"pressure": p, "depth": depth})


def cmd_rpf(cfg, out, depth):
    data = rpf(cfg.spec, cfg.f, depth=depth)
    write_json(os.path.join(out, "rpf.json"),
               {"lam": data.lam, "pressure": math.log(data.lam),
                "residual": data.residual, "depth": data.depth})
    write_csv(os.path.join(out, "rpf.csv"),
              ["word", "h", "nu", "gibbs"],
              [(_word_str(w), h, n, g) for w, h, n, g in
               zip(data.words, data.h, data.nu, data.gibbs)])
    print("lam = %.12f" % data.lam)


def cmd_solve_pf(cfg, out, depth):
    root = solve_pressure_root(cfg.spec, cfg.f, cfg.tau, depth=depth)
    print("%.12f" % root)
    write_json(os.path.join(out, "solve_pf.json"), {"root": root, "depth": depth})


def cmd_solve_sz(cfg, out, depth):
    z = param_complex(cfg, "z")
    s = solve_s_for_z(cfg.spec, cfg.f, cfg.tau, cfg.g, z, depth=depth)
    print("s(z) = %.12f + %.12fi" % (s.real, s.imag))
    write_json(os.path.join(out, "solve_sz.json"),
               {"z": _cplx(z), "s": _cplx(s), "depth": depth})


def cmd_zn(cfg, out, depth):
    n_max = int(param(cfg, "n_max", 8))
    s = param_complex(cfg, "s", 0.0)
    z = param_complex(cfg, "z", 0.0)
    rows = []
    for n in range(1, n_max + 1):
        v = zn_exact(cfg.spec, cfg.f, cfg.tau, cfg.g, s, z, n)
        rows.append((n, v.real, v.imag))
    write_csv(os.path.join(out, "zn.csv"), ["n", "re", "im"], rows)
    for n, re, im in rows:
        print("Z_%d = %.12g%+.12gi" % (n, re, im))


def cmd_zeta(cfg, out, depth):
    s = param_complex(cfg, "s")
    z = param_complex(cfg, "z", 0.0)
    n_terms = int(param(cfg, "n_terms", 40))
    v = zeta_partial(cfg.spec, cfg.f, cfg.tau, cfg.g, s, z, n_terms, depth=depth)
    write_json(os.path.join(out, "zeta.json"),
               {"s": _cplx(s), "z": _cplx(z), "n_terms": n_terms,
                "raw": _cplx(v.raw), "value": _cplx(v.value),
                "tail_ratio": v.tail_ratio, "diverged": v.diverged})
    print("zeta = %.12g%+.12gi (tail ratio %.4f)"
          % (v.value.real, v.value.imag, v.tail_ratio))


def cmd_ruelle_check(cfg, out, depth):
    n_max = int(param(cfg, "n_max", 8))
    s = param_complex(cfg, "s", 0.0)
    z = param_complex(cfg, "z", 0.0)
    rows = []
    for n in range(1, n_max + 1):
        rep = ruelle_identity_check(cfg.spec, cfg.f, cfg.tau, cfg.g, s, z, n)
        rows.append((n, rep.identity_residual, rep.telescope_residual))
    write_csv(os.path.join(out, "ruelle_check.csv"),
              ["n", "identity_residual", "telescope_residual"], rows)
    worst = max(max(r[1], r[2]) for r in rows)
    write_json(os.path.join(out, "ruelle_check.json"),
               {"worst_residual": worst, "n_max": n_max,
                "s": _cplx(s), "z": _cplx(z)})
    print("worst residual %.3e" % worst)


def cmd_eta_g(cfg, out, depth):
    s = param_complex(cfg, "s")
    delta = float(param(cfg, "delta", 0.05))
    nodes = int(param(cfg, "nodes", 128))
    v = eta_g(cfg.spec, cfg.f, cfg.tau, cfg.g, s, delta=delta, nodes=nodes,
              depth=depth)
    write_json(os.path.join(out, "eta_g.json"),
               {"s": _cplx(s), "delta": delta, "nodes": nodes,
                "value": _cplx(v.value), "doubling_diff": v.doubling_diff})
    print("eta = %.12g%+.12gi" % (v.value.real, v.value.imag))


def cmd_residue(cfg, out, depth):
    delta = float(param(cfg, "delta", 0.05))
    nodes = int(param(cfg, "nodes", 128))
    rep = residue_check(cfg.spec, cfg.f, cfg.tau, cfg.g, depth=depth,
                        delta=delta, nodes=nodes)
    write_json(os.path.join(out, "residue.json"),
               {"estimate": _cplx(rep.estimate), "target": rep.target,
                "rel_err": rep.rel_err, "root": rep.root})
    print("residue %.8f (target %.8f, rel err %.3e)"
          % (rep.estimate.real, rep.target, rep.rel_err))


def _catalog(cfg, depth):
    T = float(param(cfg, "T"))
    f_u = _resolve_fu(cfg, depth)
    return build_catalog(cfg.spec, cfg.tau, f=cfg.f, g=cfg.g, f_u=f_u,
                         horizon=T), T


def cmd_orbits(cfg, out, depth):
    cat, T = _catalog(cfg, depth)
    write_csv(os.path.join(out, "orbits.csv"),
              ["word", "n", "lam", "lam_f", "lam_g", "lam_u"],
              [(_word_str(r.word), r.n, r.lam, r.lam_f, r.lam_g, r.lam_u)
               for r in cat.records])
    write_json(os.path.join(out, "orbits.json"),
               {"horizon": cat.horizon, "n_cap": cat.n_cap,
                "count": len(cat.records)})
    print("%d primitive orbits below T = %g" % (len(cat.records), T))


def cmd_pi_f(cfg, out, depth):
    cat, T = _catalog(cfg, depth)
    pr = solve_pressure_root(cfg.spec, cfg.f, cfg.tau, depth=depth)
    # the li comparison only makes sense off the lattice case
    lattice = False
    for b in cfg.params.get("lattice_b") or []:
        norm = normalize(cfg.spec, cfg.f, cfg.tau, pr, depth=depth)
        diag = lattice_diagnostic(cfg.spec, norm.potential, cfg.tau, float(b),
                                  depth=depth)
        lattice = lattice or diag["lattice"]
    grid = cfg.params.get("T_grid") or [T]
    if lattice:
        write_json(os.path.join(out, "pi_f.json"),
                   {"growth_rate": pr, "lattice_flagged": True})
        print("lattice roof flagged; li comparison skipped")
        return
    pts = counting_ratio_series(cat, pr, [float(t) for t in grid])
    write_csv(os.path.join(out, "pi_f.csv"),
              ["T", "count", "li_target", "ratio"],
              [(p.T, p.value, p.target, p.ratio) for p in pts])
    write_json(os.path.join(out, "pi_f.json"),
               {"growth_rate": pr, "final_ratio": pts[-1].ratio,
                "lattice_flagged": False})
    print("final ratio %.4f" % pts[-1].ratio)


def cmd_hannay_ozorio(cfg, out, depth):
    cat, T = _catalog(cfg, depth)
    kind = str(param(cfg, "delta_schedule", "sqrt"))
    pr = solve_pressure_root(cfg.spec, cfg.f, cfg.tau, depth=depth)
    norm = normalize(cfg.spec, cfg.f, cfg.tau, pr, depth=depth)
    num = equilibrium_integral(norm.source, cfg.g)
    den = equilibrium_integral(norm.source, cfg.tau)
    target = num / den
    grid = cfg.params.get("T_grid") or [T]
    pts = window_series(cat, [float(t) for t in grid], kind, target)
    write_csv(os.path.join(out, "hannay_ozorio.csv"),
              ["T", "delta", "value", "target", "rel_err", "n_orbits"],
              [(p.T, p.delta, p.value, p.target, p.rel_err, p.n_orbits)
               for p in pts])
    exp_report = exponential_window_report(cat, [float(t) for t in grid])
    write_json(os.path.join(out, "hannay_ozorio.json"),
               {"schedule": kind, "target": target,
                "final_rel_err": pts[-1].rel_err,
                "exponential_windows": exp_report})
    print("final rel err %.4f" % pts[-1].rel_err)


def _normalized(cfg, depth):
    root = solve_pressure_root(cfg.spec, cfg.f, cfg.tau, depth=depth)
    return normalize(cfg.spec, cfg.f, cfg.tau, root, depth=depth)


def cmd_decay(cfg, out, depth):
    b_grid = [float(b) for b in param(cfg, "b_grid", [5.0, 10.0, 20.0, 40.0])]
    m_max = int(param(cfg, "m_max", 12))
    norm = _normalized(cfg, min(depth, 3))
    f0 = norm.potential
    grid = tuple((0.0, b, 0.0, 0.0) for b in b_grid)
    regime = RegimeSpec(kind=B_LEADING, B=1.0, nu=1.0,
                        b0_or_w0=min(abs(b) for b in b_grid), grid=grid)
    fit = measure_decay(cfg.spec, f0, cfg.tau, cfg.g, regime, depth, m_max,
                        cfg.metric, seed=cfg.seed)
    rows = []
    for p in fit.points:
        for m, v in enumerate(p.norms, start=1):
            rows.append((p.a, p.b, p.c, p.w, m, v))
    write_csv(os.path.join(out, "decay.csv"),
              ["a", "b", "c", "w", "m", "norm"], rows)
    write_json(os.path.join(out, "decay_fit.json"),
               {"C": fit.c_global, "rho": fit.rho_global, "eps": fit.eps,
                "residual": max(p.residual for p in fit.points),
                "per_point": [{"b": p.b, "w": p.w, "rho": p.rho}
                              for p in fit.points]})
    print("rho_global = %.6f" % fit.rho_global)


def cmd_ly_check(cfg, out, depth):
    m_max = int(param(cfg, "m_max", 8))
    t_depth = float(param(cfg, "t_depth", 1.0))
    norm = _normalized(cfg, min(depth, 3))
    rep = lasota_yorke_check(cfg.spec, norm.potential, cfg.tau, cfg.g,
                             0.0, 0.0, t_depth, m_max, cfg.metric,
                             depth=depth, seed=cfg.seed)
    write_csv(os.path.join(out, "ly_ratios.csv"), ["m", "ratio"],
              list(enumerate(rep.ratios, start=1)))
    write_json(os.path.join(out, "ly_check.json"),
               {"A0": rep.A0, "E": rep.E, "gamma_hat": rep.gamma_hat,
                "slope": rep.slope,
                "passed": all(rep.pass_table)})
    print("A0 = %.6f, slope = %.4f" % (rep.A0, rep.slope))


def cmd_lattice_test(cfg, out, depth):
    b = float(param(cfg, "b", 2 * math.pi))
    norm = _normalized(cfg, min(depth, 3))
    rep = lattice_diagnostic(cfg.spec, norm.potential, cfg.tau, b,
                             depth=depth)
    write_json(os.path.join(out, "lattice.json"), rep)
    print("modulus %.9f lattice=%s" % (rep["modulus"], rep["lattice"]))


COMMANDS = {
    "pressure": cmd_pressure,
    "rpf": cmd_rpf,
    "solve-pf": cmd_solve_pf,
    "solve-sz": cmd_solve_sz,
    "zn": cmd_zn,
    "zeta": cmd_zeta,
    "ruelle-check": cmd_ruelle_check,
    "eta-g": cmd_eta_g,
    "residue": cmd_residue,
    "orbits": cmd_orbits,
    "pi-f": cmd_pi_f,
    "hannay-ozorio": cmd_hannay_ozorio,
    "decay": cmd_decay,
    "ly-check": cmd_ly_check,
    "lattice-test": cmd_lattice_test,
}


def main(argv=None):
    ap = argparse.ArgumentParser(prog="shiftlab",
                                 description="numerical workbench for "
                                 "weighted shift dynamics")
    ap.add_argument("subcommand", choices=sorted(COMMANDS) + ["from-manifest"])
    ap.add_argument("--config", help="path to the YAML run configuration")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--seed", type=int, default=None, help="seed override")
    ap.add_argument("--threads", type=int, default=None,
                    help="BLAS thread cap (best effort)")
    ap.add_argument("--depth", type=int, default=None,
                    help="cylinder depth override")
    ap.add_argument("--manifest", help="manifest path for from-manifest")
    args = ap.parse_args(argv)

    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)

    try:
        if args.subcommand == "from-manifest":
            if not args.manifest:
                raise ConfigInvalid("--manifest", "required for from-manifest")
            base = os.path.dirname(os.path.abspath(args.manifest))
            fields = {}
            with open(args.manifest) as fh:
                for line in fh:
                    key, _, val = line.partition(":")
                    fields[key.strip()] = val.strip()
            sub = fields["subcommand"]
            cfg_path = os.path.join(base, fields["config_snapshot"])
            args = argparse.Namespace(subcommand=sub, config=cfg_path,
                                      out=args.out, seed=None, depth=None)
        if not args.config:
            raise ConfigInvalid("--config", "a config file is required")
        with open(args.config) as fh:
            config_text = fh.read()
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        depth = args.depth if args.depth is not None else cfg.depth
        os.makedirs(args.out, exist_ok=True)
        start = time.time()
        COMMANDS[args.subcommand](cfg, args.out, depth)
        write_manifest(args.out, args.subcommand, config_text, cfg.seed,
                       time.time() - start)
        return 0
    except Exception as exc:  # map to stable exit codes per error class
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                print("error: %s" % exc, file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
