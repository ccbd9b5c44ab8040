"""Command-line entry point: ``wearout <command> [options]``."""

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Optional

from . import _accel
from .code_size import AliveChannel, log_m_ccc
from .prob_core import DamageParams

log = logging.getLogger("wearout")

NATS_PER_BIT = math.log(2.0)


@dataclass
class RunConfig:
    epsilon: float = 0.11
    gamma: float = 0.5
    s_threshold: int = 5
    eta: float = 1e-3
    n_max: int = 400
    prune_tol: float = 1e-12
    log_base: str = "bits"
    third_order: float = 0.0
    trials: int = 10 ** 6
    seed: int = 0
    output_format: str = "csv"
    output_path: Optional[str] = None

    def validate(self):
        for name in ("epsilon", "gamma", "eta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if not 0.0 <= self.prune_tol < 1.0:
            raise ValueError("prune_tol must lie in [0, 1)")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.s_threshold < 0:
            raise ValueError("s_threshold must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.log_base not in ("bits", "nats"):
            raise ValueError("log_base must be 'bits' or 'nats'")
        if self.output_format not in ("csv", "json"):
            raise ValueError("output_format must be 'csv' or 'json'")
        return self

    @property
    def channel(self):
        return AliveChannel.bsc(self.epsilon)

    @property
    def params(self):
        return DamageParams(self.gamma, self.s_threshold)

    def scale(self, bits):
        return bits * NATS_PER_BIT if self.log_base == "nats" else bits

    def metadata(self):
        d = dataclasses.asdict(self)
        d.pop("output_path")
        d["unit"] = self.log_base
        d["backend"] = _accel.backend_name()
        return d


# option name -> RunConfig field
_FIELDS = {
    "eps": "epsilon", "gamma": "gamma", "wear_threshold": "s_threshold", "eta": "eta",
    "n_max": "n_max", "prune_tol": "prune_tol", "log_base": "log_base",
    "third_order": "third_order", "trials": "trials", "seed": "seed",
    "format": "output_format", "out": "output_path",
}


def build_config(args):
    base = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            base = json.load(fh)
        unknown = set(base) - {f.name for f in dataclasses.fields(RunConfig)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for opt, field in _FIELDS.items():
        v = getattr(args, opt, None)
        if v is not None:
            base[field] = v
    return RunConfig(**base).validate()


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, float):
        return repr(x)          # shortest string that round-trips
    return str(x)


def render(cfg, columns, rows, extra_meta=None):
    meta = cfg.metadata()
    if extra_meta:
        meta.update(extra_meta)
    if cfg.output_format == "json":
        body = {"metadata": meta, "rows": [dict(zip(columns, r)) for r in rows]}
        return json.dumps(body, indent=1) + "\n"
    buf = io.StringIO()
    buf.write("# config " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def emit(cfg, text):
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_achievability(cfg, args):
    from .dp_achievability import solve_achievability, traceback
    curve, table = solve_achievability(cfg.n_max, cfg.eta, cfg.channel, cfg.params,
                                       cfg.prune_tol, cfg.third_order)
    unit = cfg.log_base
    rows = []
    for N in range(1, cfg.n_max + 1):
        s = traceback(table, N)
        rows.append((N, cfg.scale(float(curve[N])), s.num_blocks, s.schedule_string()))
    return render(cfg, ["N", f"value_{unit}", "m", "blocks"], rows, {"bound": "achievability"})


def cmd_converse(cfg, args):
    from .dp_converse import solve_converse, traceback_converse
    curve, tables = solve_converse(cfg.n_max, cfg.eta, cfg.channel, cfg.params, cfg.prune_tol,
                                   exact_combos=args.exact_combos)
    rows = []
    for N in range(1, cfg.n_max + 1):
        s = traceback_converse(tables, N)
        rows.append((N, cfg.scale(float(curve[N])), s.num_blocks, s.schedule_string()))
    note = ("alive bound evaluated with the per-block code size; blocks list "
            "n:k with k the quantized weight increment")
    return render(cfg, ["N", f"value_{cfg.log_base}", "m", "blocks"], rows,
                  {"bound": "converse", "note": note})


def cmd_single_block(cfg, args):
    from .dp_achievability import solve_achievability, solve_single_block
    from .dp_converse import solve_converse, solve_single_block_converse
    ach, _ = solve_achievability(cfg.n_max, cfg.eta, cfg.channel, cfg.params,
                                 cfg.prune_tol, cfg.third_order)
    ach1, arg_h = solve_single_block(cfg.n_max, cfg.eta, cfg.channel, cfg.params, cfg.third_order)
    rows_cols = ["N", "achievability_single", "achievability_multi", "single_h"]
    extra = []
    if not args.skip_converse:
        conv, _ = solve_converse(cfg.n_max, cfg.eta, cfg.channel, cfg.params, cfg.prune_tol,
                                 exact_combos=args.exact_combos)
        conv1 = solve_single_block_converse(cfg.n_max, cfg.eta, cfg.channel, cfg.params,
                                            cfg.prune_tol, exact_combos=args.exact_combos)
        rows_cols += ["converse_single", "converse_multi"]
        extra = [conv1, conv]
    rows = []
    for N in range(1, cfg.n_max + 1):
        r = [N, cfg.scale(float(ach1[N])), cfg.scale(float(ach[N])), int(arg_h[N])]
        r += [cfg.scale(float(c[N])) for c in extra]
        rows.append(tuple(r))
    return render(cfg, rows_cols, rows, {"bound": "single_block"})


def _parse_schedule(text):
    pairs = []
    for part in text.replace(",", ";").split(";"):
        part = part.strip()
        if part:
            n, h = part.split(":")
            pairs.append((int(n), int(h)))
    if not pairs:
        raise ValueError("empty schedule")
    return pairs


def _schedule_from_file(path, row):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    for rec in csv.DictReader(lines):
        if int(rec["N"]) == row:
            return _parse_schedule(rec["blocks"])
    raise ValueError(f"no row N={row} in {path}")


def cmd_simulate(cfg, args):
    from .prob_core import binom_cdf
    from .schedule import BlockPlan, Schedule, evaluate_schedule
    from .simulator import check_against_exact, feedback_sweep, simulate_schedule
    if args.schedule:
        pairs = _parse_schedule(args.schedule)
    elif args.schedule_file:
        pairs = _schedule_from_file(args.schedule_file, args.row)
    else:
        raise ValueError("give --schedule or --schedule-file")
    p = cfg.params
    blocks = tuple(BlockPlan(n, h, log_m_ccc(n, h, cfg.eta, cfg.channel, cfg.third_order))
                   for n, h in pairs)
    sched = Schedule(blocks)
    res = simulate_schedule(sched, p, cfg.trials, cfg.seed)
    within = check_against_exact(res, sched, p)
    rows, cum = [], 0
    for j, (b, c, hw, ok) in enumerate(zip(blocks, res.per_block_alive_counts,
                                          res.confidence_half_widths, within)):
        cum += b.h
        rows.append((j + 1, b.n, b.h, cfg.scale(b.log_m), binom_cdf(p.s_threshold, cum, p.gamma),
                     c / res.trials, hw, "yes" if ok else "no"))
    worst, bad = feedback_sweep(args.feedback_w_max, range(0, p.s_threshold + 1), (p.gamma,))
    meta = {
        "schedule": sched.schedule_string(),
        "exact_expected_log_volume": cfg.scale(evaluate_schedule(sched, p)),
        "empirical_expected_log_volume": cfg.scale(res.empirical_expected_log_volume),
        "feedback_identity_max_error": worst,
        "feedback_identity_pass": not bad,
        "rng": "Philox, SeedSequence substreams",
    }
    return render(cfg, ["block", "n", "h", f"log_m_{cfg.log_base}", "alive_exact",
                        "alive_empirical", "half_width_4sigma", "within"], rows, meta)


def cmd_selftest(cfg, args):
    from . import selftest
    ok = selftest.run(be_scale=args.be_scale, budget_s=args.budget)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--eps", type=float, help="BSC crossover probability (default 0.11)")
    p.add_argument("--gamma", type=float, help="damage probability per transmitted one (default 0.5)")
    p.add_argument("--wear-threshold", type=int, dest="wear_threshold",
                   help="damage budget S (default 5)")
    p.add_argument("--eta", type=float, help="target block error probability (default 1e-3)")
    p.add_argument("--n-max", type=int, dest="n_max", help="largest total length (default 400)")
    p.add_argument("--prune-tol", type=float, dest="prune_tol",
                   help="drop weights whose alive probability is below this (default 1e-12)")
    p.add_argument("--log-base", choices=("bits", "nats"), dest="log_base")
    p.add_argument("--third-order", type=float, dest="third_order",
                   help="constant added to every constant-composition log size (default 0)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--threads", type=int, default=0, help="numba worker threads")
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser():
    ap = argparse.ArgumentParser(prog="wearout",
                                 description="Expected log-volume bounds for a wear-out binary channel.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("achievability", "achievability curve and schedules"),
                        ("converse", "converse curve and schedules"),
                        ("single-block", "single-block curves next to the multi-block ones")):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name != "achievability":
            p.add_argument("--exact-combos", type=int, default=1024, dest="exact_combos",
                           help="use the exact alive bound when M*(N+1) is at most this")
        if name == "single-block":
            p.add_argument("--skip-converse", action="store_true", dest="skip_converse")
    p = sub.add_parser("simulate", help="Monte Carlo check of a schedule")
    _common(p)
    p.add_argument("--schedule", help="blocks as 'n:h;n:h;...'")
    p.add_argument("--schedule-file", dest="schedule_file", help="CSV written by 'achievability'")
    p.add_argument("--row", type=int, default=300, help="row N to take from --schedule-file")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--feedback-w-max", type=int, default=50, dest="feedback_w_max")
    p = sub.add_parser("selftest", help="run the property and oracle suite")
    _common(p)
    p.add_argument("--be-scale", type=float, default=1.0, dest="be_scale",
                   help="multiply the Berry-Esseen constant (fault injection)")
    p.add_argument("--budget", type=float, default=120.0, help="runtime budget in seconds")
    return ap


_COMMANDS = {
    "achievability": cmd_achievability,
    "converse": cmd_converse,
    "single-block": cmd_single_block,
    "simulate": cmd_simulate,
    "selftest": cmd_selftest,
}


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"wearout: {exc}", file=sys.stderr)
        return 2
    _accel.set_threads(args.threads)
    try:
        out = _COMMANDS[args.command](cfg, args)
    except (ValueError, OSError) as exc:
        print(f"wearout: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, int):
        return out
    emit(cfg, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
