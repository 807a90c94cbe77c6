"""Command-line front end.

Subcommands map one-to-one onto the library surfaces; every run writes a
deterministic report (JSON or CSV) and prints a short summary.  All long-form
flags can be pre-set through environment variables with the ``CANTOREULER_``
prefix (flag ``--max-gen`` becomes ``CANTOREULER_MAX_GEN``); explicit flags
win.  Exit codes: 0 success / all checks pass, 1 at least one check failed,
2 usage error, 3 resource or capability limit.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

from .battery import run_battery
from .concentration import dimension_zero_certificate, reduced_defect
from .dyadic import DyadicCube, GenerationLimitError, cantor_generation, generation_level
from .measure import (
    MorreyConfig,
    OmegaMeasure,
    generation_atoms,
    morrey_log_norm,
    omega_cube,
    omega_k_cube,
    stabilization_generation,
)
from .report import (
    Check,
    RunConfig,
    VerificationReport,
    atomic_write,
    emit_report,
    frac_decimal,
    frac_str,
    log2_str,
    rows_to_csv_bytes,
)
from .sparse import build_tower, divergence_profile, verify_sparse
from .vortex import (
    CapabilityError,
    density_morrey_norm,
    dm_scaling_report,
    l2_closed_form,
    l2_quadrature,
    patch_params,
)

ENV_PREFIX = "CANTOREULER_"

SUBCOMMANDS = (
    "cantor",
    "measure",
    "morrey",
    "sparse",
    "patch",
    "energy",
    "defect",
    "scaling",
    "certify-dimension",
    "verify-all",
)


def _env_default(flag: str, fallback):
    key = ENV_PREFIX + flag.replace("-", "_").upper()
    return os.environ.get(key, fallback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantoreuler",
        description="Exact verification engine for the corner-Cantor measure and its eddy fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-gen", type=int, default=int(_env_default("max-gen", 4)))
        p.add_argument("--patch-c", type=Fraction, default=Fraction(str(_env_default("patch-c", "2"))))
        p.add_argument("--alpha", type=Fraction, default=Fraction(str(_env_default("alpha", "1"))))
        p.add_argument("--log-base", choices=("2", "e"), default=str(_env_default("log-base", "2")))
        p.add_argument("--depth", type=int, default=int(_env_default("depth", 1024)))
        p.add_argument("--format", choices=("json", "csv"), default=str(_env_default("format", "json")))
        p.add_argument("--output", default=_env_default("output", None))
        p.add_argument("--seed", type=int, default=int(_env_default("seed", 0)))

    p = sub.add_parser("cantor", help="enumerate a corner generation")
    add_common(p)
    p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("measure", help="exact measure of one dyadic cube")
    add_common(p)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--ix", type=int, default=0)
    p.add_argument("--iy", type=int, default=0)

    p = sub.add_parser("morrey", help="log-weighted circulation norm search")
    add_common(p)
    p.add_argument(
        "--target",
        default="omega",
        help="omega | dirac:<k> | patch:<k>",
    )

    p = sub.add_parser("sparse", help="towers and the square-sum profile")
    add_common(p)
    p.add_argument("--profile", action="store_true")
    p.add_argument("--tower", nargs=2, type=int, metavar=("K", "M"))
    p.add_argument("--threshold", type=int, default=4)

    p = sub.add_parser("patch", help="eddy parameters and exact identities")
    add_common(p)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("energy", help="closed-form vs quadrature energies")
    add_common(p)

    p = sub.add_parser("defect", help="energy localization on one cube")
    add_common(p)
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--ix", type=int, default=0)
    p.add_argument("--iy", type=int, default=0)
    p.add_argument("--kmax", type=int, default=3)

    p = sub.add_parser("scaling", help="single-sign scaling baseline norms")
    add_common(p)
    p.add_argument("--eps", action="append", default=None, help="dyadic eps, repeatable")

    p = sub.add_parser("certify-dimension", help="zero-dimension cover certificate")
    add_common(p)
    p.add_argument("--gamma", type=Fraction, required=True)
    p.add_argument("--delta", type=Fraction, required=True)

    p = sub.add_parser("verify-all", help="run the full verification battery")
    add_common(p)

    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        max_generation=args.max_gen,
        patch_c=args.patch_c,
        morrey_alpha=args.alpha,
        log_base=args.log_base,
        morrey_depth=args.depth,
        output_format=args.format,
        output_path=args.output,
        seed=args.seed,
    )


def _default_output(cfg: RunConfig, command: str) -> str:
    if cfg.output_path:
        return cfg.output_path
    ext = "json" if cfg.output_format == "json" else "csv"
    return f"{command.replace('-', '_')}_report.{ext}"


def _report_for(cfg: RunConfig) -> VerificationReport:
    return VerificationReport(cfg)


def _cmd_cantor(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    cubes = cantor_generation(args.k, max_generation=6)
    rep.add(
        Check(
            f"cantor.count.k{args.k}",
            "generation k holds 4^k squares",
            "==",
            len(cubes),
            str(1 << (2 * args.k)),
            len(cubes) == 1 << (2 * args.k),
        )
    )
    rep.datasets["cubes"] = [
        {
            "address": list(c.address),
            "corner": [frac_str(v.to_fraction()) for v in c.corner],
            "center": [frac_str(v.to_fraction()) for v in c.center],
            "side_log2": -generation_level(args.k),
        }
        for c in cubes
    ]
    return rep


def _cmd_measure(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    cube = DyadicCube(args.level, args.ix, args.iy)
    value = omega_cube(cube)
    k0 = stabilization_generation(cube.level)
    rep.add(
        Check(
            "measure.value",
            "limit measure of the requested cube",
            "==",
            value,
            frac_str(value),
            True,
        )
    )
    rep.datasets["stabilization"] = [
        {"k": k, "mass": frac_str(omega_k_cube(k, cube))}
        for k in range(k0, min(k0 + 2, 6) + 1)
    ]
    return rep


def _cmd_morrey(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    mc = MorreyConfig(alpha=cfg.morrey_alpha, log_base=cfg.log_base, max_level=cfg.morrey_depth)
    target = args.target
    if target == "omega":
        result = morrey_log_norm(OmegaMeasure(), mc)
    elif target.startswith("dirac:"):
        result = morrey_log_norm(generation_atoms(int(target.split(":", 1)[1])), mc)
    elif target.startswith("patch:"):
        result = density_morrey_norm(int(target.split(":", 1)[1]), mc, cfg.patch_c)
    else:
        raise ValueError(f"unknown morrey target {target!r}")
    computed = result.norm_exact if result.norm_exact is not None else result.norm_value
    rep.add(
        Check(
            f"morrey.norm.{target}",
            "sup over dyadic cubes of weight^alpha * mass",
            "==",
            computed,
            frac_str(result.norm_exact) if result.norm_exact is not None else "",
            True,
        )
    )
    rep.add(
        Check(
            f"morrey.argmax_level.{target}",
            "level attaining the supremum",
            "==",
            result.argmax_level,
            str(result.argmax_level),
            True,
        )
    )
    rep.datasets["per_level"] = [
        {
            "level": e.level,
            "value": float(e.value_exact) if e.value_exact is not None else e.value.to_float(),
            "value_rational": frac_str(e.value_exact) if e.value_exact is not None else "",
            "certified": e.certified,
        }
        for e in result.per_level
    ]
    return rep


def _cmd_sparse(cfg: RunConfig, args, out_path: str) -> tuple[VerificationReport, bool]:
    rep = _report_for(cfg)
    wrote_csv = False
    if args.tower:
        k, m = args.tower
        fam = build_tower(k, m)
        ok, cert = verify_sparse(fam)
        rep.add(
            Check(
                f"sparse.tower.k{k}.m{m}",
                "corner tower is sparse with 3/4 witness ratios",
                "bool",
                ok,
                "true",
                ok,
            )
        )
        rep.datasets["tower"] = {
            "levels": [c.level for c in fam.cubes],
            "ratios": [frac_str(r) for r in cert.ratios],
        }
    if args.profile or not args.tower:
        rows = divergence_profile(cfg.max_generation)
        rep.datasets["profile"] = [
            {
                "generation": r.k,
                "towers": r.tower_count,
                "cubes_per_tower": r.cubes_per_tower,
                "cube_mass": frac_str(r.cube_mass),
                "contribution": frac_decimal(r.contribution),
                "cumulative": frac_decimal(r.cumulative),
            }
            for r in rows
        ]
        rep.add(
            Check(
                "sparse.profile.constant",
                "per-generation tower square-sums all equal 3/16",
                "==",
                rows[-1].contribution,
                frac_str(Fraction(3, 16)),
                all(r.contribution == Fraction(3, 16) for r in rows),
            )
        )
        if args.profile:
            header = ["generation", "towers", "cubes_per_tower", "cube_mass", "contribution", "cumulative"]
            csv_rows = [
                [
                    str(r.k),
                    str(r.tower_count),
                    str(r.cubes_per_tower),
                    frac_str(r.cube_mass),
                    frac_decimal(r.contribution),
                    frac_decimal(r.cumulative),
                ]
                for r in rows
            ]
            atomic_write(out_path, rows_to_csv_bytes(header, csv_rows))
            wrote_csv = True
    return rep, wrote_csv


def _cmd_patch(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    p = patch_params(args.k, cfg.patch_c)
    l1 = 2 * p.q_plus * p.core_r2
    circ = p.q_plus * p.core_r2 + p.q_minus * (p.r2 - p.delta)
    rep.add(Check("patch.l1", "2 pi Omega+ delta^2 = 4^-k", "==", l1, frac_str(Fraction(1, 1 << (2 * args.k))), l1 == Fraction(1, 1 << (2 * args.k))))
    rep.add(Check("patch.circulation", "net circulation vanishes", "==", circ, "0", circ == 0))
    rep.datasets["params"] = {
        "k": args.k,
        "c": frac_str(p.c),
        "delta": frac_str(p.delta),
        "r2": frac_str(p.r2),
        "q_plus": frac_str(p.q_plus),
        "q_minus": frac_str(p.q_minus),
        "delta_log2": math.log2(float(p.delta)),
    }
    return rep


def _cmd_energy(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    table = []
    for k in range(1, cfg.max_generation + 1):
        closed = l2_closed_form(k, cfg.patch_c)
        row = {"k": k, "closed_form": repr(closed.value())}
        if k <= 2:
            q = l2_quadrature(k, cfg.patch_c)
            rel = abs(q - closed.value()) / closed.value()
            row["quadrature"] = repr(q)
            row["rel_err"] = repr(rel)
            rep.add(
                Check(
                    f"energy.agreement.k{k}",
                    "closed form vs quadrature",
                    "<=",
                    rel,
                    "1e-06",
                    rel <= 1e-6,
                )
            )
        table.append(row)
    rep.datasets["energies"] = table
    return rep


def _cmd_defect(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    cube = DyadicCube(args.level, args.ix, args.iy)
    rd = reduced_defect(cube, args.kmax, cfg.patch_c)
    rep.add(
        Check(
            "defect.stabilized_fraction",
            "stabilized energy fraction equals the limit measure",
            "==",
            rd.stabilized_fraction,
            frac_str(rd.omega_value),
            rd.stabilized_fraction == rd.omega_value,
        )
    )
    rep.datasets["defect"] = {
        "cube": {"level": cube.level, "ix": cube.ix, "iy": cube.iy},
        "energies": [{"k": k, "energy": repr(e)} for k, e in rd.per_k_energy],
        "fractions": [{"k": k, "fraction": frac_str(f)} for k, f in rd.per_k_fraction],
        "omega": frac_str(rd.omega_value),
    }
    return rep


def _cmd_scaling(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    eps_list = args.eps or ["1/16", "1/256", "1/4096"]
    values = []
    for eps_str in eps_list:
        r = dm_scaling_report(Fraction(eps_str), cfg.morrey_alpha)
        values.append(
            {
                "eps": eps_str,
                "norm": repr(r.norm_value.to_float()),
                "argmax_level": r.argmax_level,
            }
        )
    rep.datasets["scaling"] = {"alpha": frac_str(cfg.morrey_alpha), "values": values}
    rep.add(
        Check(
            "scaling.computed",
            "norms of the scaled single-sign eddy family",
            "bool",
            True,
            "true",
            True,
        )
    )
    return rep


def _cmd_certify_dimension(cfg: RunConfig, args) -> VerificationReport:
    rep = _report_for(cfg)
    cert = dimension_zero_certificate(args.gamma, args.delta)
    rep.add(
        Check(
            "dimension.m",
            "smallest m with l_m^gamma 4^m < delta and l_m < delta",
            "==",
            cert.m,
            str(cert.m),
            all(cert.checks),
        )
    )
    rep.datasets["certificate"] = {
        "gamma": frac_str(cert.gamma),
        "delta": frac_str(cert.delta),
        "m": cert.m,
        "cover_value_log2": log2_str(cert.cover_value_log2),
        "side_value_log2": log2_str(cert.side_value_log2),
    }
    return rep


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        out_path = _default_output(cfg, args.command)
        if args.command == "verify-all":
            rep = run_battery(cfg)
        elif args.command == "cantor":
            rep = _cmd_cantor(cfg, args)
        elif args.command == "measure":
            rep = _cmd_measure(cfg, args)
        elif args.command == "morrey":
            rep = _cmd_morrey(cfg, args)
        elif args.command == "sparse":
            rep, wrote = _cmd_sparse(cfg, args, out_path)
            if wrote:
                print(f"wrote {out_path}")
                summary = "pass" if rep.status == "pass" else "fail"
                print(f"status: {summary}")
                return 0 if rep.status == "pass" else 1
        elif args.command == "patch":
            rep = _cmd_patch(cfg, args)
        elif args.command == "energy":
            rep = _cmd_energy(cfg, args)
        elif args.command == "defect":
            rep = _cmd_defect(cfg, args)
        elif args.command == "scaling":
            rep = _cmd_scaling(cfg, args)
        elif args.command == "certify-dimension":
            rep = _cmd_certify_dimension(cfg, args)
        else:  # pragma: no cover - argparse guards this
            parser.error(f"unknown command {args.command}")
    except (GenerationLimitError, CapabilityError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    emit_report(rep, out_path)
    print(f"wrote {out_path}")
    for check in rep.checks:
        marker = "PASS" if check.passed else "FAIL"
        print(f"  [{marker}] {check.check_id}")
    print(f"status: {rep.status}")
    return 0 if rep.status == "pass" else 1


def main() -> int:
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
