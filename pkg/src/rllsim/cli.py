"""Batch experiment runner.

    rllsim run <config.json> [--out DIR] [--threads N] [--seed S]

Progress goes to stderr, data to CSV only.  Every CSV starts with comment
lines carrying the config hash, the master seed, and the source revision, so
a result file is traceable on its own.  Exit codes: 0 success, 1 config
error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import os
import subprocess
import sys
import time
from pathlib import Path

from rllsim.config import ConfigError, ExperimentConfig


def _describe_source():
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except Exception:
        pass
    return "unknown"


class CsvSink:
    """Serialized CSV writer, flushed row by row.

    Every row carries the config hash, master seed, and source revision, so a
    result file is self-describing and reruns are detectable from the CSV
    alone; the header comments repeat them for human readers.
    """

    def __init__(self, path, columns, cfg: ExperimentConfig):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._provenance = [cfg.config_hash(), cfg.master_seed, _describe_source()]
        self._fh = open(self.path, "w", newline="")
        self._fh.write(f"# config_hash: {self._provenance[0]}\n")
        self._fh.write(f"# master_seed: {cfg.master_seed}\n")
        self._fh.write(f"# source: {self._provenance[2]}\n")
        self._fh.write(f"# mode: {cfg.mode}\n")
        self._fh.write("# trailing columns config_hash/master_seed/source repeat on every row\n")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(list(columns) + ["config_hash", "master_seed", "source"])

    def row(self, values):
        self._writer.writerow(list(values) + self._provenance)
        self._fh.flush()

    def close(self):
        self._fh.close()


def _log(msg):
    print(msg, file=sys.stderr, flush=True)


def run_ber(cfg: ExperimentConfig, out_dir, threads):
    from rllsim.system import ber_point

    system = cfg.build_system()
    raw = cfg.raw
    snrs = [None] if raw.get("noiseless") else raw["snr_db"]
    trials = int(raw.get("trials", 100))
    stop = raw.get("stop_at_errors")
    u_o = system.sched.u_o
    cols = ["snr_db", "trials", "bit_errors", "ber", "frame_errors", "fer", "mean_flips"]
    cols += [f"ber_{i + 1}" for i in range(u_o)]
    sink = CsvSink(Path(out_dir) / cfg.output, cols, cfg)
    try:
        for i, snr in enumerate(snrs):
            t0 = time.time()
            pt = ber_point(system, snr, trials, stop, cfg.master_seed, i, threads)
            label = "noiseless" if snr is None else snr
            sink.row([label, pt.trials, pt.bit_errors, f"{pt.ber:.6e}",
                      pt.frame_errors, f"{pt.fer:.6e}", f"{pt.mean_flips:.3f}"]
                     + [f"{b:.6e}" for b in pt.ber_per_iteration])
            _log(f"ber {label} dB: ber={pt.ber:.3e} fer={pt.fer:.3f} "
                 f"({pt.trials} trials, {time.time() - t0:.1f}s)")
    finally:
        sink.close()


def run_de(cfg: ExperimentConfig, out_dir, threads):
    from rllsim.analysis import de_run

    system = cfg.build_system()
    raw = cfg.raw
    opts = raw.get("de", {})
    sink = CsvSink(Path(out_dir) / cfg.output,
                   ["snr_db", "iteration", "pe", "converged"], cfg)
    try:
        for snr in raw["snr_db"]:
            res = de_run(
                system, snr,
                u_max=int(opts.get("u_max", 15)),
                trials=int(opts.get("trials", 1000)),
                seed=cfg.master_seed,
                step=float(opts.get("step", 0.05)),
                half_bins=int(opts.get("half_bins", 500)),
            )
            for u, pe in enumerate(res.pe_trace):
                sink.row([snr, u, f"{pe:.6e}", int(res.converged)])
            _log(f"de {snr} dB: final_pe={res.final_pe:.3e} converged={res.converged}")
    finally:
        sink.close()


def run_exit(cfg: ExperimentConfig, out_dir, threads):
    from rllsim.analysis import exit_trajectory

    system = cfg.build_system()
    raw = cfg.raw
    frames = int(raw.get("exit", {}).get("frames", 4))
    sink = CsvSink(Path(out_dir) / cfg.output,
                   ["snr_db", "iteration", "i_in", "i_out"], cfg)
    try:
        for snr in raw["snr_db"]:
            traj = exit_trajectory(system, snr, frames=frames, seed=cfg.master_seed)
            for it, (i_in, i_out) in enumerate(traj, start=1):
                sink.row([snr, it, f"{i_in:.6f}", f"{i_out:.6f}"])
            _log(f"exit {snr} dB: endpoint I_out={traj[-1][1]:.4f}")
    finally:
        sink.close()


def run_optimize(cfg: ExperimentConfig, out_dir, threads):
    from rllsim.optimize import Candidate, de_optimize, make_simulation_evaluator

    opts = cfg.raw.get("optimize", {})
    init = Candidate(
        degrees=tuple(opts.get("init_vnd", [2, 5])),
        delta=tuple(opts.get("init_delta", [0.5, 0.5])),
        weak_four=bool(opts.get("weak_four", False)),
    )
    evaluator = make_simulation_evaluator(
        n=int(opts.get("n", 1024)),
        rate=float(opts.get("rate", 0.65)),
        probe_snrs=tuple(opts.get("probe_snrs", (15.5, 16.5))),
        ref_snr=opts.get("ref_snr"),
        trials=int(opts.get("trials", 24)),
        stop_at_errors=opts.get("stop_at_errors"),
        master_seed=cfg.master_seed,
        channel_kind=opts.get("channel_kind", "pr"),
        u_o=int(opts.get("u_o", 3)),
        u_i=int(opts.get("u_i", 3)),
        threads=threads,
    )
    res = de_optimize(
        init, evaluator,
        alpha=float(opts.get("alpha", 0.5)),
        population_size=int(opts.get("population", 50)),
        max_degree_cap=int(opts.get("cap", 10)),
        generations=int(opts.get("generations", 10)),
        patience=int(opts.get("patience", 3)),
        seed=cfg.master_seed,
    )
    sink = CsvSink(Path(out_dir) / cfg.output,
                   ["generation", "vnd", "delta", "error_floor", "ber", "is_best"], cfg)
    try:
        for e in res.log:
            sink.row([
                e.generation,
                "|".join(str(d) for d in e.degrees),
                "|".join(f"{w:.6f}" for w in e.delta),
                int(e.error_floor),
                f"{e.ber:.6e}",
                int(e.is_best),
            ])
    finally:
        sink.close()
    _log(f"optimize: best VND={list(res.best.degrees)} delta={list(res.best.delta)} "
         f"ber={res.best.fitness.ber:.3e} after {res.generations_run} generations")


def run_flip_stats(cfg: ExperimentConfig, out_dir, threads):
    from rllsim.rll_flip import flip_rate

    f = cfg.raw["flip"]
    mean, std = flip_rate(
        int(f["k"]), int(f["n"]), int(f["trials"]),
        seed=cfg.master_seed, alphabet=int(f.get("levels", 2)),
    )
    sink = CsvSink(Path(out_dir) / cfg.output,
                   ["k", "n", "trials", "levels", "mean_rate", "std"], cfg)
    try:
        sink.row([f["k"], f["n"], f["trials"], f.get("levels", 2),
                  f"{mean:.8e}", f"{std:.8e}"])
    finally:
        sink.close()
    _log(f"flip_stats k={f['k']}: rate={mean:.4e} (+/- {std:.1e})")


RUNNERS = {
    "ber": run_ber,
    "de": run_de,
    "exit": run_exit,
    "optimize": run_optimize,
    "flip_stats": run_flip_stats,
}


def main(argv=None):
    parser = argparse.ArgumentParser(prog="rllsim", description=__doc__)
    sub = parser.add_subparsers(dest="command")
    runp = sub.add_parser("run", help="execute one experiment config")
    runp.add_argument("config", help="path to the JSON experiment config")
    runp.add_argument("--out", default=".", help="output directory for CSV files")
    runp.add_argument("--threads", type=int, default=None,
                      help="worker threads (default: RLLSIM_THREADS or 1)")
    runp.add_argument("--seed", type=int, default=None, help="override master seed")
    args = parser.parse_args(argv)
    if args.command != "run":
        parser.print_help(sys.stderr)
        return 1
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("RLLSIM_THREADS", "1"))
    try:
        cfg = ExperimentConfig.from_file(args.config)
        if args.seed is not None:
            cfg.master_seed = args.seed
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return 1
    try:
        RUNNERS[cfg.mode](cfg, args.out, threads)
    except KeyboardInterrupt:
        _log("interrupted; partial results flushed")
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        _log(f"runtime error: {exc}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
