"""Command-line front end.

Subcommands: expand, gamma, correlators, verify, reduce.  JSON is the
machine contract (UTF-8, canonically ordered, byte-identical across runs
and thread counts); text and latex renderings exist for eyeballing.
String-equation solutions are cached per (algebra, levels, table hash)
under --cache-dir / $DSTAU_CACHE_DIR, written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import build_algebra, parse_spec
from .correlators import ZetaSeries, barF1, barFm, build_diagonalization
from .numberfield import FieldElement
from .rational import QQ, qq_str
from .series import GradedSeries, var_label
from .stringeq import (
    levels_for_cap,
    load_gamma,
    save_gamma,
    solve_reduced_string_equation,
)
from .tables import load_bundled, load_table, verify_expansion
from .tau import TauExpansion, log_tau, q_families, reduction_check


def default_cache_dir() -> str:
    env = os.environ.get("DSTAU_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "dstau")


def gamma_for(alg, levels, cache_dir):
    gsol = load_gamma(alg, levels, cache_dir)
    if gsol is None:
        gsol = solve_reduced_string_equation(alg, levels)
        try:
            save_gamma(gsol, cache_dir)
        except OSError:
            pass  # unwritable cache dir is not fatal
    return gsol


# ---------------------------------------------------------------------------
# rendering


def _series_json(series: GradedSeries) -> list:
    return series.to_json()


def _series_text(series: GradedSeries, unit: str = "lambda") -> str:
    parts = []
    for key in series.sorted_keys():
        eps, lam, flat = key
        coeff = series.terms[key]
        if isinstance(coeff, FieldElement):
            coeff = coeff.project_rational()
        mono = []
        if eps:
            mono.append(f"eps^{eps}")
        if lam:
            mono.append(f"{unit}^{lam}")
        for i in range(0, len(flat), 2):
            name, e = var_label(flat[i]), flat[i + 1]
            mono.append(f"{name}^{e}" if e > 1 else name)
        parts.append(f"({qq_str(coeff)}) " + " ".join(mono))
    return "\n".join(parts) if parts else "0"


def _latex_frac(q) -> str:
    num, den = q.numerator, q.denominator
    if den == 1:
        return str(num)
    sign = "-" if num < 0 else ""
    return rf"{sign}\frac{{{abs(num)}}}{{{den}}}"


def _series_latex(series: GradedSeries) -> str:
    by_lam: dict = {}
    for key in series.sorted_keys():
        by_lam.setdefault(key[1], []).append(key)
    chunks = []
    for lam, keys in sorted(by_lam.items()):
        terms = []
        for eps, _, flat in keys:
            coeff = series.terms[(eps, lam, flat)]
            if isinstance(coeff, FieldElement):
                coeff = coeff.project_rational()
            mono = []
            if eps:
                mono.append(rf"\epsilon^{{{eps}}}")
            for i in range(0, len(flat), 2):
                name, e = var_label(flat[i]), flat[i + 1]
                if name.startswith("q_"):
                    _, a, k = name.split("_")
                    v = rf"q_{{{a},{k}}}"
                else:
                    body = name[2:]
                    v = (
                        rf"t_{{{body[:-1]}'}}" if body.endswith("p") else rf"t_{{{body}}}"
                    )
                mono.append(v if e == 1 else v + rf"^{{{e}}}")
            terms.append(_latex_frac(coeff) + r"\," + " ".join(mono))
        lam_factor = r"\lambda" + (rf"^{{{lam}}}" if lam != 1 else "")
        chunks.append("\\Big(" + " + ".join(terms) + "\\Big)" + lam_factor)
    return " + ".join(chunks) if chunks else "0"


def emit_expansion(exp: TauExpansion, form: str, fmt: str, out) -> None:
    if fmt == "json":
        payload = {
            "algebra": exp.alg.label,
            "cap": exp.cap,
            "N": exp.N,
            "form": form,
            "warnings": exp.warnings,
        }
        if form == "t-vars":
            payload["log_tau"] = _series_json(exp.log_tau_t)
        elif form == "q-vars":
            payload["q_order"] = exp.q_order
            payload["log_tau"] = _series_json(exp.log_tau_q)
        else:
            payload["q_order"] = exp.q_order
            payload["genus"] = {
                str(g): _series_json(s) for g, s in sorted(exp.genus_parts.items())
            }
        json.dump(payload, out, indent=1, sort_keys=True)
        out.write("\n")
        return
    render = _series_text if fmt == "text" else _series_latex
    if form == "t-vars":
        out.write(render(exp.log_tau_t) + "\n")
    elif form == "q-vars":
        out.write(render(exp.log_tau_q) + "\n")
    else:
        for g, s in sorted(exp.genus_parts.items()):
            label = f"F_{g} =" if fmt == "text" else rf"\mathcal{{F}}_{{{g}}} ="
            out.write(label + "\n" + render(s) + "\n")
    for w in exp.warnings:
        print(f"warning: {w}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    if args.order < 1:
        print("error: --order must be >= 1", file=sys.stderr)
        return 2
    alg = build_algebra(parse_spec(args.algebra))
    gsol = gamma_for(alg, levels_for_cap(alg, args.order), args.cache_dir)
    exp = log_tau(alg, gsol, args.order, threads=args.threads)
    emit_expansion(exp, args.form, args.format, sys.stdout)
    return 0


def cmd_gamma(args) -> int:
    if args.levels < 1:
        print("error: --levels must be >= 1", file=sys.stderr)
        return 2
    alg = build_algebra(parse_spec(args.algebra))
    gsol = gamma_for(alg, args.levels, args.cache_dir)
    payload = {"algebra": alg.label, "levels": gsol.levels, "components": []}
    for i, y in enumerate(gsol.component_zmats(), start=1):
        rows = []
        for (z, r, c), v in sorted(y.items()):
            cv = qq_str(v) if not isinstance(v, FieldElement) else v.to_json()
            rows.append({"z": z, "row": r, "col": c, "coeff": cv})
        payload["components"].append(
            {"level": i, "principal_degree": -i * (alg.h + 1), "entries": rows}
        )
    gamma_fourier = {}
    lo, _hi = gsol.gamma.z_range()
    for k in range(-1, lo - 1, -1):
        blk = gsol.gamma.blocks.get(k)
        if blk is None:
            continue
        rows = []
        for r in range(alg.n):
            for c in range(alg.n):
                e = blk[r][c]
                if e is None or e.is_zero():
                    continue
                for (eps, lam, _v), coeff in sorted(e.terms.items()):
                    if isinstance(coeff, FieldElement):
                        coeff = coeff.project_rational()
                    rows.append(
                        {"row": r, "col": c, "eps": eps, "lambda": lam,
                         "coeff": qq_str(coeff)}
                    )
        gamma_fourier[str(k)] = rows
    payload["gamma_fourier"] = gamma_fourier
    if alg.label == "A1":
        from .stringeq import a1_closed_form_check

        payload["closed_form_check"] = a1_closed_form_check(gsol)
    json.dump(payload, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_correlators(args) -> int:
    if args.m < 1:
        print("error: --m must be >= 1", file=sys.stderr)
        return 2
    alg = build_algebra(parse_spec(args.algebra))
    gsol = gamma_for(alg, levels_for_cap(alg, args.order), args.cache_dir)
    diag = build_diagonalization(alg)
    if args.m == 1:
        fbar = barF1(alg, gsol, args.order, diag)
    else:
        fbar = barFm(alg, gsol, args.m, args.order, diag)
    entries = []
    for (exps, eps, lam), coeff in fbar.terms.items():
        entries.append(
            {
                "zeta_exponents": list(exps),
                "eps": eps,
                "lambda": lam,
                "coeff": qq_str(coeff),
            }
        )
    entries.sort(key=lambda e: (e["lambda"], e["eps"], e["zeta_exponents"]))
    payload = {
        "algebra": alg.label,
        "m": args.m,
        "cap": args.order,
        "hatted_slots": list(fbar.hat_mask),
        "entries": entries,
    }
    json.dump(payload, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_verify(args) -> int:
    alg = build_algebra(parse_spec(args.algebra))
    table = load_table(args.table) if args.table else load_bundled(
        alg.label, args.form_short
    )
    if table.form == "t":
        cap = table.max_lambda
    else:
        cap = 2 * (alg.h + 1) * table.max_lambda
    gsol = gamma_for(alg, levels_for_cap(alg, cap), args.cache_dir)
    exp = log_tau(alg, gsol, cap, threads=args.threads)
    rep = verify_expansion(exp, table)
    for line in rep.lines():
        print(line)
    for key in sorted(table.entries):
        status = "ok"
        for k, *_ in rep.wrong:
            if k == key:
                status = "WRONG"
        for k, _ in rep.missing:
            if k == key:
                status = "MISSING"
        if args.per_term:
            print(f"  [{status}] {key}")
    return 0 if rep.ok else 1


def cmd_reduce(args) -> int:
    parent_alg = build_algebra(parse_spec(args.parent))
    child_alg = build_algebra(parse_spec(args.child))
    var_map, zero_set = derive_reduction(parent_alg, child_alg)
    cap_p = 2 * (parent_alg.h + 1) * args.order
    cap_c = 2 * (child_alg.h + 1) * args.order
    p_exp = log_tau(
        parent_alg, gamma_for(parent_alg, levels_for_cap(parent_alg, cap_p),
                              args.cache_dir), cap_p, threads=args.threads
    )
    c_exp = log_tau(
        child_alg, gamma_for(child_alg, levels_for_cap(child_alg, cap_c),
                             args.cache_dir), cap_c, threads=args.threads
    )
    report = reduction_check(p_exp, c_exp, var_map, zero_set, q_order=args.order)
    payload = {
        "parent": parent_alg.label,
        "child": child_alg.label,
        "q_order": report.q_order,
        "family_map": {str(k): v for k, v in var_map.items()},
        "zeroed_parent_families": sorted(zero_set),
        "ok": report.ok,
        "first_diff": report.message or None,
    }
    json.dump(payload, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")
    return 0 if report.ok else 1


def derive_reduction(parent_alg, child_alg):
    """Match child q-families into the parent's by exponent label."""
    p_fams = q_families(parent_alg)
    c_fams = q_families(child_alg)
    p_index = {(lab.j, lab.primed): a + 1 for a, lab in enumerate(p_fams)}
    var_map = {}
    for a, lab in enumerate(c_fams, start=1):
        key = (lab.j, lab.primed)
        if key not in p_index:
            raise ValueError(
                f"child family {lab} has no counterpart in {parent_alg.label}"
            )
        var_map[a] = p_index[key]
    zero_set = set(range(1, len(p_fams) + 1)) - set(var_map.values())
    return var_map, zero_set


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dstau",
        description="Exact topological tau expansions of Drinfeld-Sokolov "
        "hierarchies (types A, B, C, D, G2).",
    )
    parser.add_argument(
        "--cache-dir", default=default_cache_dir(),
        help="cache directory for string-equation solutions "
        "(default: $DSTAU_CACHE_DIR or ~/.cache/dstau)",
    )
    parser.add_argument(
        "--threads", type=int, default=1,
        help="worker threads for independent trace powers (default 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="compute log tau to a lambda order")
    p.add_argument("--algebra", required=True, help="e.g. A1, A2, B3, C2, D4, G2")
    p.add_argument("--order", type=int, required=True, help="lambda cap (t-grading)")
    p.add_argument(
        "--form", choices=["t-vars", "q-vars", "genus-split"], default="t-vars"
    )
    p.add_argument("--format", choices=["json", "text", "latex"], default="json")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("gamma", help="solve the reduced string equation")
    p.add_argument("--algebra", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("correlators", help="m-point generating function at t=0")
    p.add_argument("--algebra", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--order", type=int, required=True, help="lambda cap")
    p.set_defaults(func=cmd_correlators)

    p = sub.add_parser("verify", help="diff a computed expansion against a table")
    p.add_argument("--algebra", required=True)
    p.add_argument("--table", help="table JSON path (default: bundled)")
    p.add_argument(
        "--form-short", choices=["t", "q"], default="q",
        help="which bundled table to use when --table is omitted",
    )
    p.add_argument("--per-term", action="store_true", help="print per-term status")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="check a tau-function reduction")
    p.add_argument("--parent", required=True)
    p.add_argument("--child", required=True)
    p.add_argument("--order", type=int, required=True, help="common q-order")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
