"""Experiment configuration: JSON schema, validation, hashing.

A config file is one JSON object.  Shared fields:

    mode          "ber" | "de" | "exit" | "optimize" | "flip_stats"
    master_seed   int, root of every RNG stream
    output        CSV filename (written under the output directory)

Code construction (all modes except flip_stats):

    code: {
      "n": int, "rate": float,
      "vnd": [int...], "delta": [float...],        # node perspective
      "cnd": [int...], "gamma": [float...],        # optional; balanced if absent
      "seed": int,                                  # PEG seed (default 1)
      "alist": "path"                               # alternative to vnd/delta
    }

System wiring:

    scheme        "none" | "type_I" | "type_II"
    labeling      "natural" | "gray"
    fill_symbol   1 | 2 (defaults to the scheme's pairing)
    flipping      bool
    rll_k         int (default 3)
    levels        2 | 4 (default 4)
    channel: { "kind": "pr"|"mo_binary"|"mo_4level", "beta": float, "taps": [...] }
    u_o, u_i      iteration counts; reset: bool; algo: "sum-product"|"min-sum"

Mode specifics:

    ber:       snr_db: [floats], trials: int, stop_at_errors: int|null
    de:        snr_db: [floats], de: {u_max, trials, step, half_bins}
    exit:      snr_db: [floats], exit: {frames}
    optimize:  optimize: {alpha, population, cap, generations, patience,
                          probe_snrs, ref_snr, trials, n, rate, u_o, u_i}
    flip_stats: flip: {k, n, trials, levels}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

MODES = ("ber", "de", "exit", "optimize", "flip_stats")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


def _require(obj, key, kind, where):
    if key not in obj:
        raise ConfigError(f"{where}: missing required field {key!r}")
    val = obj[key]
    if kind is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, kind):
        raise ConfigError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


@dataclass
class ExperimentConfig:
    mode: str
    raw: dict = field(repr=False)
    master_seed: int = 0
    output: str = "results.csv"

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as f:
                raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        except OSError as exc:
            raise ConfigError(str(exc)) from exc
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw):
        mode = _require(raw, "mode", str, "config")
        if mode not in MODES:
            raise ConfigError(f"config.mode: unknown mode {mode!r}, expected one of {MODES}")
        cfg = cls(
            mode=mode,
            raw=raw,
            master_seed=int(raw.get("master_seed", 0)),
            output=str(raw.get("output", f"{mode}.csv")),
        )
        cfg.validate()
        return cfg

    # ------------------------------------------------------------------
    def validate(self):
        raw = self.raw
        if self.mode == "flip_stats":
            flip = _require(raw, "flip", dict, "config")
            _require(flip, "k", int, "config.flip")
            _require(flip, "n", int, "config.flip")
            _require(flip, "trials", int, "config.flip")
            if flip.get("levels", 2) not in (2, 4):
                raise ConfigError("config.flip.levels: must be 2 or 4")
            return
        if self.mode == "optimize":
            opt = raw.get("optimize", {})
            if not isinstance(opt, dict):
                raise ConfigError("config.optimize: expected object")
            if not 0.0 <= float(opt.get("alpha", 0.5)) <= 1.0:
                raise ConfigError("config.optimize.alpha: outside [0, 1]")
            return
        code = _require(raw, "code", dict, "config")
        if "alist" not in code:
            n = _require(code, "n", int, "config.code")
            _require(code, "rate", float, "config.code")
            if "distribution" in code:
                dist = code["distribution"]
                for key in ("var", "chk", "perspective"):
                    if key not in dist:
                        raise ConfigError(f"config.code.distribution: missing {key!r}")
            else:
                vnd = _require(code, "vnd", list, "config.code")
                delta = _require(code, "delta", list, "config.code")
                if len(vnd) != len(delta):
                    raise ConfigError("config.code: vnd and delta lengths differ")
                if ("cnd" in code) != ("gamma" in code):
                    raise ConfigError("config.code: cnd and gamma must come together")
            levels = raw.get("levels", 4)
            if levels == 4 and n % 2:
                raise ConfigError("config.code.n: must be even for 4-level systems")
        scheme = raw.get("scheme", "type_II")
        if scheme not in ("none", "type_I", "type_II"):
            raise ConfigError(f"config.scheme: unknown scheme {scheme!r}")
        if raw.get("labeling", "natural") not in ("natural", "gray"):
            raise ConfigError("config.labeling: must be 'natural' or 'gray'")
        if raw.get("fill_symbol") not in (None, 1, 2):
            raise ConfigError("config.fill_symbol: must be 1 or 2")
        chan = raw.get("channel", {})
        if chan.get("kind", "pr") not in ("pr", "mo_binary", "mo_4level"):
            raise ConfigError(f"config.channel.kind: unknown kind {chan.get('kind')!r}")
        if self.mode in ("ber", "de", "exit"):
            snrs = _require(raw, "snr_db", list, "config")
            if not snrs and not raw.get("noiseless"):
                raise ConfigError("config.snr_db: empty")
        if self.mode == "ber" and not raw.get("noiseless"):
            _require(raw, "trials", int, "config")

    # ------------------------------------------------------------------
    def config_hash(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:12]

    def build_system(self):
        from rllsim.peg import build_encoder, load_alist
        from rllsim.system import System, make_system
        from rllsim.channel import ChannelParams
        from rllsim.equalize import TurboSchedule
        from rllsim.map_mod import get_labeling

        raw = self.raw
        code = raw["code"]
        chan = raw.get("channel", {})
        kind = chan.get("kind", "pr")
        levels = int(raw.get("levels", 4))
        common = dict(
            levels=levels,
            scheme=raw.get("scheme", "type_II" if levels == 4 else "none"),
            fill_symbol=raw.get("fill_symbol"),
            flipping=bool(raw.get("flipping", True)),
            rll_k=int(raw.get("rll_k", 3)),
        )
        sched = TurboSchedule(
            u_o=int(raw.get("u_o", 5)),
            u_i=int(raw.get("u_i", 3)),
            reset=bool(raw.get("reset", False)),
            algo=raw.get("algo", "sum-product"),
        )
        if "alist" in code:
            graph = load_alist(code["alist"])
            enc = build_encoder(graph)
            params = ChannelParams(kind=kind, ebn0_db=None, beta=chan.get("beta"),
                                   taps=chan.get("taps"))
            lab = get_labeling(raw.get("labeling", "natural")) if levels == 4 else None
            return System(graph=graph, encoder=enc, channel=params, sched=sched,
                          labeling=lab, **common)
        if "distribution" in code:
            from rllsim.degree import DegreeDistribution, edge_to_node

            dist = DegreeDistribution.from_json_dict(code["distribution"])
            if dist.perspective == "edge":
                dist = edge_to_node(dist)
            vnd = [k for k, _ in dist.var_degrees]
            delta = [w for _, w in dist.var_degrees]
            cnd = [l for l, _ in dist.chk_degrees]
            gamma = [w for _, w in dist.chk_degrees]
        else:
            vnd = [int(v) for v in code["vnd"]]
            delta = [float(d) for d in code["delta"]]
            cnd = code.get("cnd")
            gamma = code.get("gamma")
        return make_system(
            n=int(code["n"]),
            rate=float(code["rate"]),
            vnd=vnd,
            delta=delta,
            cnd=cnd,
            gamma=gamma,
            code_seed=int(code.get("seed", 1)),
            labeling=raw.get("labeling", "natural"),
            channel_kind=kind,
            beta=chan.get("beta"),
            taps=chan.get("taps"),
            u_o=sched.u_o, u_i=sched.u_i, reset=sched.reset, algo=sched.algo,
            **common,
        )
