"""Command line interface.

Subcommands:

  construct       derive and certify algebra parameters (JSON)
  division-table  the reference division verdict grid (CSV)
  analyze         quadratic-form matrix, detected groups, exponent (JSON)
  mindet          minimum determinant search (CSV)
  decode-verify   conditional decoder vs exhaustive ML oracle (text)
  simulate        word error rate curves (CSV)

All floating point output is rounded to 12 significant digits and exact
rationals are printed as fractions, so reruns are byte identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import algebra, channel, codebook, fastdecode
from .numberfield import FieldContext, FieldElement

# Short names for the simulated codes: (catalog entry, basis, variant).
CODE_SHORTCUTS = {
    "C2": (1, "B2", "plain"),
    "C3": (1, "B3", "plain"),
    "C4": (1, "B2", "C4"),
    "C5": (5, "B2", "plain"),
}


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _round_floats(obj):
    if isinstance(obj, float):
        return _sig12(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, output: str | None) -> None:
    _emit(json.dumps(_round_floats(obj), indent=2) + "\n", output)


def _parse_rational_vector(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected four comma-separated rationals, got {len(parts)}")
    return tuple(Fraction(p) for p in parts)


def _params_from_args(args) -> algebra.CodeParams:
    if args.example is not None:
        return algebra.catalog_entry(args.example)
    if args.c is None or args.cprime is None or args.u is None:
        raise ValueError("either --example or all of --c, --cprime, --u are required")
    ctx = FieldContext(args.c, args.cprime)
    coords = _parse_rational_vector(args.u)
    u = ctx.element(*coords)
    return algebra.build_params(ctx, u, k=Fraction(args.k), lprime=Fraction(args.lprime))


def _resolve_code(args) -> tuple:
    """(params, basis_id, variant) from --code or --example/--basis/--variant."""
    if getattr(args, "code", None):
        name = args.code.upper()
        if name not in CODE_SHORTCUTS:
            raise ValueError(f"unknown code shortcut {args.code!r}, known: {sorted(CODE_SHORTCUTS)}")
        example, basis, variant = CODE_SHORTCUTS[name]
        return algebra.catalog_entry(example), basis, variant
    params = _params_from_args(args)
    return params, args.basis, getattr(args, "variant", "plain")


def _build_code(args) -> codebook.DispersionCode:
    params, basis, variant = _resolve_code(args)
    code = codebook.build_code(params, basis)
    if variant == "C4":
        code = codebook.c4_transform(code)
    return code


# ----------------------------------------------------------------------
# subcommands


def cmd_construct(args) -> int:
    try:
        params = _params_from_args(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    doc = algebra.params_to_json(params)
    if params.division.is_division is False and params.conditions.ok:
        doc["note"] = "not a division algebra (no nonvanishing determinant certificate); " \
                      "unit parameters of this kind give good shaping"
    _emit_json(doc, args.output)
    return 0 if params.conditions.ok else 1


def cmd_division_table(args) -> int:
    lines = ["c,minus_cprime,is_division,witness"]
    for c, mcp, verdict, witness in algebra.division_table():
        lines.append(f"{c},{mcp},{'yes' if verdict else 'no'},{witness or ''}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_analyze(args) -> int:
    code = _build_code(args)
    b = fastdecode.hurwitz_radon(code)
    adj = fastdecode.adjacency(b)
    gs = fastdecode.detect_groups(b, args.target)
    b_out = [[0.0 if (i != j and not adj[i, j]) else _sig12(float(b[i, j]))
              for j in range(16)] for i in range(16)]
    doc = {
        "code": code.name,
        "b_matrix": b_out,
        "conditioned": [i + 1 for i in gs.conditioned],
        "groups": [[i + 1 for i in g] for g in gs.groups],
        "exponent": gs.exponent,
        "trivial": gs.trivial,
        "symbol_indexing": "1-based, four symbols per field coefficient",
    }
    _emit_json(doc, args.output)
    return 0


def cmd_mindet(args) -> int:
    code = _build_code(args)
    res = codebook.min_det_search(code, args.strategy, n=args.samples, seed=args.seed)
    lines = [
        "code,strategy,candidates,min_abs_det,energy_scale,witness",
        f"{code.name},{res.strategy},{res.candidates},{res.min_abs_det:.12g},"
        f"{code.energy_scale:.12g},{' '.join(str(v) for v in res.witness)}",
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_decode_verify(args) -> int:
    code = _build_code(args)
    b = fastdecode.hurwitz_radon(code)
    gs = fastdecode.detect_groups(b)
    pam = fastdecode.pam_levels(2)
    if args.trials < 1:
        raise ValueError("decode-verify needs at least one trial")
    sigma2 = channel.snr_to_sigma2(args.snr_db)
    matches = 0
    worst = 0.0
    for trial in range(args.trials):
        rng = channel._trial_rng(args.seed, 0, trial)
        s0 = rng.integers(0, 2, 16) * 2.0 - 1.0
        X = np.einsum("i,ijk->jk", s0, code.generators)
        inst = channel.ChannelInstance(channel.sample_channel(rng), sigma2)
        y = fastdecode.stack_real(channel.transmit(X, inst, rng))
        ch = fastdecode.real_channel(code, inst.H)
        r_ml = fastdecode.ml_exhaustive(y, ch, pam)
        r_cg = fastdecode.conditional_group_decode(y, ch, gs, pam)
        gap = abs(r_ml.metric - r_cg.metric)
        worst = max(worst, gap)
        if np.array_equal(r_ml.symbols, r_cg.symbols) or gap <= 1e-9:
            matches += 1
    print(f"code: {code.name}")
    print(f"structure: conditioned={len(gs.conditioned)} groups={[len(g) for g in gs.groups]} "
          f"exponent={gs.exponent}")
    print(f"visits: conditional={r_cg.visits} exhaustive={r_ml.visits}")
    print(f"config: trials={args.trials} snr_db={_sig12(args.snr_db)} seed={args.seed} rng={channel.RNG_SCHEME}")
    print(f"oracle agreement: {matches}/{args.trials} (worst metric gap {worst:.3e})")
    if matches != args.trials:
        print("MISMATCH against the exhaustive oracle", file=sys.stderr)
        return 1
    return 0


def _parse_snr_list(text: str):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range form is start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 9))
            v += step
        return out
    return [float(p) for p in text.split(",")]


def cmd_simulate(args) -> int:
    code = _build_code(args)
    b = fastdecode.hurwitz_radon(code)
    gs = fastdecode.detect_groups(b)
    snrs = _parse_snr_list(args.snr)
    records = channel.simulate_wer(code, gs, snrs, seed=args.seed,
                                   min_errors=args.min_errors, max_trials=args.max_trials,
                                   threads=args.threads)
    import io

    buf = io.StringIO()
    channel.write_wer_csv(records, buf, code_name=code.name, basis=code.basis.id,
                          variant=code.variant, seed=args.seed,
                          min_errors=args.min_errors, max_trials=args.max_trials,
                          threads=args.threads)
    _emit(buf.getvalue(), args.output)
    return 0


# ----------------------------------------------------------------------
# argument wiring


def _add_params_args(sp, with_basis=True, with_code=True):
    sp.add_argument("--example", type=int, choices=(1, 2, 3, 4, 5),
                    help="catalog entry number")
    sp.add_argument("--c", type=int, help="squarefree c in w^2 = -c")
    sp.add_argument("--cprime", type=int, help="squarefree c' in w'^2 = -c'")
    sp.add_argument("--u", help="norm-one unit as four comma-separated rationals "
                               "over the basis {1, w', w, w'w}; write --u=-1/2,... "
                               "(equals form) when the first coefficient is negative")
    sp.add_argument("--k", default="1", help="rational scale on the first generator square")
    sp.add_argument("--lprime", default="1", help="rational scale on the second generator square")
    if with_basis:
        sp.add_argument("--basis", default="B2", choices=("B1", "B2", "B3"),
                        help="symbol basis (default B2)")
        sp.add_argument("--variant", default="plain", choices=("plain", "C4"))
    if with_code:
        sp.add_argument("--code", help="shortcut name: " + ", ".join(sorted(CODE_SHORTCUTS)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="midostc",
                                 description="Full-rate 4x2 space-time codes from crossed-product "
                                             "algebras: construction, certification, decoding, simulation")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="derive and certify algebra parameters")
    _add_params_args(sp, with_basis=False, with_code=False)
    sp.add_argument("--output", help="write JSON here instead of stdout")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("division-table", help="reference division verdicts (CSV)")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_division_table)

    sp = sub.add_parser("analyze", help="coupling matrix and decoding groups (JSON)")
    _add_params_args(sp)
    sp.add_argument("--target", type=int, help="conditioning set size (default: scan)")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("mindet", help="minimum determinant search (CSV)")
    _add_params_args(sp)
    sp.add_argument("--strategy", default="sparse_exhaustive",
                    choices=("sparse_exhaustive", "random"))
    sp.add_argument("--samples", type=int, default=1000, help="sample count for the random strategy")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_mindet)

    sp = sub.add_parser("decode-verify", help="conditional decoder against the exhaustive oracle")
    _add_params_args(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--snr-db", type=float, default=10.0, help="operating SNR in dB")
    sp.set_defaults(func=cmd_decode_verify)

    sp = sub.add_parser("simulate", help="word error rate simulation (CSV)")
    _add_params_args(sp)
    sp.add_argument("--snr", required=True,
                    help="SNR points in dB: comma list \"8,10,12\" or range \"8:16:2\"")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--min-errors", type=int, default=100)
    sp.add_argument("--max-trials", type=int, default=10 ** 6)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_simulate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
