"""Command-line front end: ``python -m sqgt <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 work exceeds the size cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import capacity as cap
from .construct import ConcatCode, concat_construct, concat_decode
from .core import (
    CodeMatrix,
    DesignParams,
    InfeasibleSizeError,
    Quantizer,
    ValidationError,
    syndrome,
    syndrome_from_dict,
    syndrome_to_dict,
)
from .disjunct import is_sq_disjunct, naive_decode, scale_code
from .randomdesign import DEFAULT_WORK_CAP, critical_rate, monte_carlo_trials, random_code

log = logging.getLogger("sqgt")


def _ints(text: str) -> list[int]:
    text = text.strip()
    return [int(v) for v in text.split(",")] if text else []


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_base(spec: str, q: int | None = None) -> CodeMatrix:
    """``id:N`` for the N x N identity, otherwise a CSV or JSON code file."""
    if spec.startswith("id:"):
        return CodeMatrix.identity(int(spec[3:]))
    path = Path(spec)
    if not path.exists():
        raise ValidationError(f"no such code file: {spec}")
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return CodeMatrix.from_dict(json.loads(text))
    return CodeMatrix.from_csv(text, q)


def load_code(path: str) -> CodeMatrix | ConcatCode:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"no such code file: {path}")
    if p.suffix.lower() != ".json":
        return CodeMatrix.from_csv(p.read_text())
    data = json.loads(p.read_text())
    if "K" in data:
        return ConcatCode.from_dict(data)
    return CodeMatrix.from_dict(data)


def _quantizer_from_args(args, code: CodeMatrix | ConcatCode) -> Quantizer:
    if getattr(args, "quantizer", None):
        return Quantizer.from_dict(json.loads(Path(args.quantizer).read_text()))
    if getattr(args, "thresholds", None):
        return Quantizer(tuple(_ints(args.thresholds)))
    if isinstance(code, ConcatCode):
        return code.quantizer
    if getattr(args, "eta", None):
        if args.Q:
            return Quantizer.equidistant(args.eta, args.Q)
        u = args.u if getattr(args, "u", None) else code.N
        return Quantizer.for_design(args.eta, code.q, u)
    raise ValidationError("give one of --quantizer, --thresholds or --eta")


def _plain(code: CodeMatrix | ConcatCode) -> CodeMatrix:
    return code.code if isinstance(code, ConcatCode) else code


def cmd_construct(args) -> int:
    if args.mode == "random":
        if args.n is None or args.N is None or args.q is None:
            raise ValidationError("random mode needs --n, --N and --q")
        code = random_code(args.n, args.N, args.q, seed=args.seed)
        _emit(_dump(code.to_dict()), args.output)
        print(f"random code: n={code.n} N={code.N} q={code.q} seed={args.seed}", file=sys.stderr)
        return 0
    if not args.base:
        raise ValidationError(f"{args.mode} mode needs --base")
    base = load_base(args.base)
    if args.mode == "scale":
        if args.factor is None:
            raise ValidationError("scale mode needs --factor")
        code = scale_code(base, args.factor, args.q)
        _emit(_dump(code.to_dict()), args.output)
        print(f"scaled code: n={code.n} N={code.N} q={code.q} max entry={int(code.matrix.max())}",
              file=sys.stderr)
        return 0
    if args.q is None or args.eta is None or args.u is None:
        raise ValidationError("concat mode needs --q, --eta and --u")
    cc = concat_construct(base, args.q, args.eta, args.u)
    _emit(_dump(cc.to_dict()), args.output)
    print(f"concatenated code: n={cc.code.n} N={cc.code.N} K={cc.K} "
          f"max entry={int(cc.code.matrix.max())} Q>={cc.quantizer.Q}", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    code = load_code(args.code)
    quant = _quantizer_from_args(args, code)
    positives = _ints(args.positives)
    y = syndrome(_plain(code), positives, quant)
    out = syndrome_to_dict(y, quant.Q)
    out["quantizer"] = quant.to_dict()
    _emit(_dump(out), args.output)
    return 0


def cmd_decode(args) -> int:
    code = load_code(args.code)
    data = json.loads(Path(args.syndrome).read_text())
    observed = syndrome_from_dict(data)
    if args.mode == "concat":
        if not isinstance(code, ConcatCode):
            raise ValidationError("concat decoding needs a concatenated code file")
        result = concat_decode(observed, code)
    else:
        if "quantizer" in data and not (args.quantizer or args.thresholds or args.eta):
            quant = Quantizer.from_dict(data["quantizer"])
        else:
            quant = _quantizer_from_args(args, code)
        params = DesignParams(_plain(code).q, quant.Q, args.u) if args.u else None
        result = naive_decode(_plain(code), observed, quant, params)
    _emit(_dump({"positives": list(result.positives), "consistent": result.consistent}), args.output)
    return 0


def cmd_check(args) -> int:
    code = load_code(args.code)
    plain = _plain(code)
    u = args.u if args.u else (code.u if isinstance(code, ConcatCode) else None)
    if u is None:
        raise ValidationError("check needs --u")
    args.u = u
    quant = _quantizer_from_args(args, code)
    report = is_sq_disjunct(plain, DesignParams(plain.q, quant.Q, u), quant)
    _emit(_dump(report.to_dict()), args.output)
    return 0


_CAP_FIELDS = ["m", "alpha_bits", "P_T", "partition", "thresholds", "per_i_bits"]


def _capacity_rows(points: list[cap.CapacityPoint], fmt: str) -> str:
    if fmt == "json":
        return _dump([p.to_dict() for p in points])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CAP_FIELDS)
    for p in points:
        writer.writerow([
            p.m,
            f"{p.alpha:.10f}",
            " ".join(f"{v:.6f}" for v in p.P_T),
            p.partition,
            " ".join(str(t) for t in p.quantizer.thresholds),
            " ".join(f"{v:.10f}" for v in p.per_i),
        ])
    return buf.getvalue()


def cmd_capacity(args) -> int:
    m_max = args.m_max if args.m_max is not None else args.m
    if m_max < args.m:
        raise ValidationError("--m-max must be >= --m")
    points = []
    for m in range(args.m, m_max + 1):
        if args.eval_only:
            if not args.pt or not (args.partition or args.thresholds):
                raise ValidationError("--eval-only needs --pt and --partition or --thresholds")
            quant = _parse_quantizer(args)
            points.append(cap.alpha(cap.SourceDistribution(_floats(args.pt)), m, quant))
        else:
            restrict = _parse_quantizer(args) if (args.partition or args.thresholds) else None
            log.info("searching m=%d q=%d Q=%d", m, args.q, args.Q)
            points.append(cap.capacity_search(m, args.q, args.Q, args.grid_step, restrict))
    _emit(_capacity_rows(points, args.format), args.output)
    return 0


def _parse_quantizer(args) -> Quantizer:
    if args.thresholds:
        return Quantizer(tuple(_ints(args.thresholds)))
    parts = [p for p in args.partition.replace(" ", "").strip("{}").split("}{")]
    return Quantizer.from_partition([_ints(p) for p in parts])


def cmd_critical_rate(args) -> int:
    report = critical_rate(args.q, args.eta, args.u, args.n, args.epsilon)
    _emit(_dump(report.to_dict()), args.output)
    return 0


def cmd_mc(args) -> int:
    results = monte_carlo_trials(args.n, args.N, args.q, args.eta, args.u, args.trials,
                                 args.seed, args.work_cap)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "disjunct", "witness"])
    for r in results:
        witness = "" if r.witness is None else f"{r.witness[0]}:{' '.join(map(str, r.witness[1]))}"
        writer.writerow([r.trial, int(r.disjunct), witness])
    _emit(buf.getvalue(), args.output)
    frac = sum(r.disjunct for r in results) / len(results)
    print(f"disjunct fraction {frac:.4f} over {len(results)} trials", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqgt", description="Semi-quantitative group testing tools.")
    parser.add_argument("--log-level", default=os.environ.get("SQGT_LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("-o", "--output", help="write here instead of stdout")

    def quant_flags(p):
        p.add_argument("--quantizer", help="quantizer JSON file")
        p.add_argument("--thresholds", help="comma-separated thresholds, e.g. 2,3")
        p.add_argument("--eta", type=int, help="equidistant step")
        p.add_argument("--Q", type=int, help="levels for --eta (default: never saturate)")

    p = sub.add_parser("construct", help="build a code")
    p.add_argument("--mode", choices=["concat", "scale", "random"], required=True)
    p.add_argument("--base", help="id:N or a CSV/JSON binary code")
    p.add_argument("--q", type=int)
    p.add_argument("--eta", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--factor", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--seed", type=int, default=0)
    out(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="syndrome of a positive set")
    p.add_argument("--code", required=True)
    p.add_argument("--positives", required=True, help="comma-separated 0-based column indices")
    p.add_argument("--u", type=int)
    quant_flags(p)
    out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode", help="recover positives from a syndrome")
    p.add_argument("--code", required=True)
    p.add_argument("--syndrome", required=True)
    p.add_argument("--mode", choices=["naive", "concat"], default="naive")
    p.add_argument("--u", type=int)
    quant_flags(p)
    out(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("check", help="verify the SQ-disjunct property")
    p.add_argument("--code", required=True)
    p.add_argument("--u", type=int)
    quant_flags(p)
    out(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("capacity", help="capacity lower bounds as CSV/JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--m-max", type=int)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--eval-only", action="store_true", help="evaluate --pt/--partition, no search")
    p.add_argument("--pt", help="comma-separated source distribution")
    p.add_argument("--partition", help='contiguous regions, e.g. "{0,1}{2}{3,4}"')
    p.add_argument("--thresholds")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    out(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("critical-rate", help="critical rate of random codes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--n", type=int, help="code length (omit for the n -> inf limit)")
    p.add_argument("--epsilon", type=float, default=0.05)
    out(p)
    p.set_defaults(func=cmd_critical_rate)

    p = sub.add_parser("mc", help="Monte Carlo disjunctness of random codes")
    for flag in ("--n", "--N", "--q", "--eta", "--u"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    out(p)
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
