"""Reproducible ghost-imaging experiments driven by one JSON config.

Sub-commands, each writing under ``--out``::

    gen          patterns/<family>.{bin,json} and a few pattern previews
    simulate     buckets/<family>_clean.csv (+ _noisy.csv and sidecar)
    reconstruct  recon/<family>_<env>_K<K>.{pgm,csv}, row upserted into
                 sweep/<family>_<env>.csv
    analyze-mc   mc/<family>_mc.csv, mc/<family>_mcn.csv, mc/<family>_mcn.pgm
    sweep        sweep/<family>_<env>.csv for every family, clean and noisy

Exit status: 0 on success, 1 on validation errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import imageio
from .gi import (
    DEFAULT_NOISE,
    BucketSeries,
    NoiseModel,
    apply_noise,
    bucket_acquire,
    characteristic_matrix,
    minmax,
    minmax_normalize,
    normalize_characteristic,
    reconstruct_matrix,
)
from .metrics import format_psnr, quality
from .patterns import (
    FAMILIES,
    PatternMatrix,
    build_hadamard_matrix,
    build_random_patterns,
    gold_patterns,
    load_patterns,
    reshape_row,
    save_patterns,
    select_rows,
)

log = logging.getLogger(__name__)

ENVIRONMENTS = ("clean", "noisy")
MAX_DENSE_N = 4096
PREVIEW_PATTERNS = 4


@dataclass
class ExperimentConfig:
    family: str = "gold"
    k: int = 12
    geometry: list[int] | None = None
    poly_x: str | None = None
    poly_y: str | None = None
    seed_x: str | None = None
    seed_y: str | None = None
    random_mode: str = "binary"
    rng_seed: int = 0
    object: str = "builtin:horse"
    binarize: bool = False
    noise: dict | None = None
    order: str = "natural"
    measurements: int | None = None
    schedule: list[int] | None = None
    out: str = "out"

    def validate(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not 0 <= int(self.rng_seed) < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")
        self.resolved_geometry()
        self.parsed_order()
        if self.noise is not None:
            NoiseModel.from_dict(self.noise)
        full = self.full_K
        sched = self.resolved_schedule()
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ValueError("schedule must be strictly ascending")
        if sched[0] < 1 or sched[-1] > full:
            raise ValueError(f"schedule values must lie in 1..{full}")
        if self.measurements is not None and not 1 <= self.measurements <= full:
            raise ValueError(
                f"measurements={self.measurements} exceeds the {full} available"
            )
        return self

    @property
    def full_K(self) -> int:
        return 1 << self.k

    def resolved_geometry(self) -> tuple[int, int]:
        if self.geometry is not None:
            m, n = (int(v) for v in self.geometry)
            if m * n != self.full_K:
                raise ValueError(f"geometry {m}x{n} does not hold 2^{self.k} pixels")
            return m, n
        if self.k % 2:
            raise ValueError(
                f"k={self.k} is odd, so there is no square frame; "
                "set \"geometry\": [m, n] with m*n = 2^k in the config"
            )
        side = 1 << (self.k // 2)
        return side, side

    def parsed_order(self) -> tuple[str, int | None]:
        if self.order == "natural":
            return "natural", None
        if self.order.startswith("perm:"):
            try:
                return "perm", int(self.order[5:])
            except ValueError:
                pass
        raise ValueError(f"order must be 'natural' or 'perm:<seed>', got {self.order!r}")

    def resolved_schedule(self) -> list[int]:
        if self.schedule:
            return [int(v) for v in self.schedule]
        step = max(1, self.full_K // 16)
        return list(range(step, self.full_K + 1, step))

    def noise_model(self) -> NoiseModel | None:
        return None if self.noise is None else NoiseModel.from_dict(self.noise)

    def seeds(self) -> dict[str, int]:
        """Independent 64-bit seeds for random patterns and detector noise."""
        children = np.random.SeedSequence(int(self.rng_seed)).spawn(2)
        pattern, noise = (int(c.generate_state(1, np.uint64)[0]) for c in children)
        return {"patterns": pattern, "noise": noise}

    def for_family(self, family: str) -> "ExperimentConfig":
        return dataclasses.replace(self, family=family)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


# -- artifact paths -----------------------------------------------------------

def _dirs(cfg):
    root = Path(cfg.out)
    return {name: root / name for name in ("patterns", "buckets", "recon", "mc", "sweep")}


def _ensure(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def pattern_stem(cfg) -> Path:
    return _dirs(cfg)["patterns"] / cfg.family


def bucket_path(cfg, env) -> Path:
    return _dirs(cfg)["buckets"] / f"{cfg.family}_{env}.csv"


def sweep_path(cfg, env) -> Path:
    return _dirs(cfg)["sweep"] / f"{cfg.family}_{env}.csv"


# -- building blocks ----------------------------------------------------------

def build_patterns(cfg: ExperimentConfig) -> PatternMatrix:
    """Full pattern set in acquisition order (ordering already applied)."""
    geometry = cfg.resolved_geometry()
    if cfg.family == "gold":
        p = gold_patterns(cfg.k, cfg.poly_x, cfg.poly_y, cfg.seed_x, cfg.seed_y, geometry)
    elif cfg.family == "hadamard":
        p = build_hadamard_matrix(cfg.k, geometry)
    else:
        p = build_random_patterns(cfg.full_K, *geometry, cfg.seeds()["patterns"],
                                  cfg.random_mode)
    order, seed = cfg.parsed_order()
    if order != "natural":
        p = select_rows(p, p.K, order, seed)
    return p


def load_config_object(cfg: ExperimentConfig):
    geometry = cfg.resolved_geometry()
    if cfg.object.startswith("builtin:"):
        name = cfg.object.split(":", 1)[1]
        if name not in ("horse", "house"):
            raise ValueError(f"unknown builtin object {name!r}")
        ref = resources.files("goldgi") / "data" / f"{name}64.pgm"
        with resources.as_file(ref) as path:
            return imageio.load_object(path, geometry, cfg.binarize)
    path = Path(cfg.object)
    if not path.exists():
        raise FileNotFoundError(f"object file not found: {path}")
    return imageio.load_object(path, geometry, cfg.binarize)


def _noisy_model(cfg):
    return cfg.noise_model() or DEFAULT_NOISE


def simulate_buckets(cfg, p, obj, env) -> BucketSeries:
    clean = bucket_acquire(p, obj)
    if env == "clean":
        return clean
    return apply_noise(clean, _noisy_model(cfg), cfg.seeds()["noise"])


def reconstruct_first(p: PatternMatrix, d: BucketSeries, K: int):
    """Reconstruct from the first K acquired measurements, minmax-normalised."""
    sub = p if K == p.K else select_rows(p, K)
    part = d if K == p.K else BucketSeries(d.values[:K], d.noise)
    return minmax_normalize(reconstruct_matrix(sub, part))


def _write_recon(cfg, env, K, values):
    stem = _ensure(_dirs(cfg)["recon"]) / f"{cfg.family}_{env}_K{K}"
    imageio.save_image(values, stem.with_suffix(".pgm"), "pgm16")
    imageio.save_image(values, stem.with_suffix(".csv"), "csv-float")
    return stem


def _metric_line(K, report):
    return f"{K},{report.mse!r},{format_psnr(report.psnr)}"


def write_sweep_csv(path: Path, rows: dict[int, str]):
    lines = ["K,mse,psnr"] + [rows[K] for K in sorted(rows)]
    _ensure(path.parent)
    path.write_text("\n".join(lines) + "\n", newline="\n")


def read_sweep_csv(path: Path) -> dict[int, str]:
    if not path.exists():
        return {}
    lines = path.read_text().splitlines()[1:]
    return {int(line.split(",")[0]): line for line in lines if line}


# -- sub-commands -------------------------------------------------------------

def cmd_gen(cfg: ExperimentConfig) -> PatternMatrix:
    cfg.validate()
    p = build_patterns(cfg)
    stem = pattern_stem(cfg)
    _ensure(stem.parent)
    save_patterns(p, stem)
    if p.is_binary:
        for s in range(1, min(PREVIEW_PATTERNS, p.K) + 1):
            imageio.save_image(reshape_row(p, s), f"{stem}_pattern{s}.pgm", "pgm8")
    log.info("wrote %s patterns (%d x %d) to %s", cfg.family, p.K, p.N, stem)
    return p


def _patterns_for(cfg):
    stem = pattern_stem(cfg)
    if not stem.with_suffix(".json").exists():
        return cmd_gen(cfg)
    p = load_patterns(stem)
    if p.K != cfg.full_K or p.geometry != cfg.resolved_geometry():
        raise ValueError(f"{stem} does not match the config; rerun 'gen'")
    return p


def cmd_simulate(cfg: ExperimentConfig) -> dict[str, BucketSeries]:
    cfg.validate()
    p = _patterns_for(cfg)
    obj = load_config_object(cfg)
    out = {"clean": simulate_buckets(cfg, p, obj, "clean")}
    if cfg.noise is not None:
        out["noisy"] = simulate_buckets(cfg, p, obj, "noisy")
    _ensure(_dirs(cfg)["buckets"])
    for env, d in out.items():
        path = bucket_path(cfg, env)
        imageio.write_bucket_csv(path, d)
        if d.noise is not None:
            imageio.write_json(path.with_suffix(".json"), d.noise)
    return out


def _buckets_for(cfg, env):
    path = bucket_path(cfg, env)
    if not path.exists():
        raise FileNotFoundError(f"missing bucket series {path}; run 'simulate' first")
    sidecar = path.with_suffix(".json")
    noise = imageio.read_json(sidecar) if sidecar.exists() else None
    return imageio.read_bucket_csv(path, noise)


def cmd_reconstruct(cfg: ExperimentConfig, env: str = "clean"):
    """Reconstruct from the first ``cfg.measurements`` buckets and score it."""
    cfg.validate()
    stem = pattern_stem(cfg)
    if not stem.with_suffix(".json").exists():
        raise FileNotFoundError(f"missing patterns {stem}; run 'gen' first")
    p = load_patterns(stem)
    d = _buckets_for(cfg, env)
    if len(d) != p.K:
        raise ValueError(f"{len(d)} buckets for {p.K} patterns")
    K = cfg.measurements or p.K
    if K > p.K:
        raise ValueError(f"K={K} exceeds the {p.K} available measurements")
    r = reconstruct_first(p, d, K)
    ref, _ = minmax(load_config_object(cfg).values)
    report = quality(r.values, ref)
    _write_recon(cfg, env, K, r.values)
    rows = read_sweep_csv(sweep_path(cfg, env))
    rows[K] = _metric_line(K, report)
    write_sweep_csv(sweep_path(cfg, env), rows)
    return r, report


def cmd_analyze_mc(cfg: ExperimentConfig):
    cfg.validate()
    if cfg.full_K > MAX_DENSE_N:
        raise ValueError(f"N={cfg.full_K} exceeds the dense analysis limit {MAX_DENSE_N}")
    p = _patterns_for(cfg)
    if cfg.measurements:
        p = select_rows(p, cfg.measurements)
    mc = characteristic_matrix(p)
    mcn = normalize_characteristic(mc)
    folder = _ensure(_dirs(cfg)["mc"])
    imageio.write_float_csv(folder / f"{cfg.family}_mc.csv", mc.values)
    imageio.write_float_csv(folder / f"{cfg.family}_mcn.csv", mcn.values)
    heat, _ = minmax(mcn.values)
    imageio.save_image(heat, folder / f"{cfg.family}_mcn.pgm", "pgm8")
    return mc, mcn


def _threads() -> int:
    raw = os.environ.get("GOLD_GI_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GOLD_GI_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("GOLD_GI_THREADS must be non-negative")
    return n or (os.cpu_count() or 1)


def cmd_sweep(cfg: ExperimentConfig) -> dict[tuple[str, str], Path]:
    """K-vs-quality curves for every family, clean and noisy.

    Missing patterns are generated; buckets are always re-simulated from the
    config so every output is a pure function of it.
    """
    cfg.validate()
    schedule = cfg.resolved_schedule()
    outputs = {}
    for family in FAMILIES:
        fcfg = cfg.for_family(family)
        p = cmd_gen(fcfg)
        obj = load_config_object(fcfg)
        ref, _ = minmax(obj.values)
        for env in ENVIRONMENTS:
            d = simulate_buckets(fcfg, p, obj, env)
            path = bucket_path(fcfg, env)
            _ensure(path.parent)
            imageio.write_bucket_csv(path, d)
            if d.noise is not None:
                imageio.write_json(path.with_suffix(".json"), d.noise)

            def point(K, fcfg=fcfg, p=p, d=d, env=env):
                r = reconstruct_first(p, d, K)
                _write_recon(fcfg, env, K, r.values)
                return _metric_line(K, quality(r.values, ref))

            with ThreadPoolExecutor(max_workers=_threads()) as pool:
                lines = list(pool.map(point, schedule))
            write_sweep_csv(sweep_path(fcfg, env), dict(zip(schedule, lines)))
            outputs[family, env] = sweep_path(fcfg, env)
            log.info("%s/%s: final %s", family, env, lines[-1])
    return outputs


# -- command line -------------------------------------------------------------

def _parse_burst(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("--burst takes p,alpha,mode")
    return [float(parts[0]), float(parts[1]), parts[2]]


def _parse_schedule(text):
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError("--schedule takes comma-separated integers")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path)
    common.add_argument("--family", choices=FAMILIES)
    common.add_argument("--k", type=int)
    common.add_argument("--object")
    common.add_argument("--binarize", action="store_true", default=None)
    common.add_argument("--noise-eta", type=float)
    common.add_argument("--noise-beta", type=float)
    common.add_argument("--burst", type=_parse_burst)
    common.add_argument("--order")
    common.add_argument("--measurements", type=int)
    common.add_argument("--schedule", type=_parse_schedule)
    common.add_argument("--out")
    common.add_argument("--rng-seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="goldgi", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="generate a pattern set")
    sub.add_parser("simulate", parents=[common], help="simulate bucket signals")
    rec = sub.add_parser("reconstruct", parents=[common], help="reconstruct and score")
    rec.add_argument("--env", choices=ENVIRONMENTS, default="clean")
    sub.add_parser("analyze-mc", parents=[common], help="characteristic matrix export")
    sub.add_parser("sweep", parents=[common], help="quality vs measurement count")
    return parser


def config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config is not None:
        cfg = ExperimentConfig.from_json(args.config.read_text())
    simple = {
        "family": args.family, "k": args.k, "object": args.object,
        "binarize": args.binarize, "order": args.order,
        "measurements": args.measurements, "schedule": args.schedule,
        "out": args.out, "rng_seed": args.rng_seed,
    }
    cfg = dataclasses.replace(cfg, **{k: v for k, v in simple.items() if v is not None})
    if args.noise_eta is not None or args.noise_beta is not None or args.burst is not None:
        noise = dict(cfg.noise or {"gaussian_rel": 0.0, "offset_rel": 0.0, "burst": None})
        if args.noise_eta is not None:
            noise["gaussian_rel"] = args.noise_eta
        if args.noise_beta is not None:
            noise["offset_rel"] = args.noise_beta
        if args.burst is not None:
            noise["burst"] = args.burst
        cfg.noise = noise
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args).validate()
        if args.command == "gen":
            cmd_gen(cfg)
        elif args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "reconstruct":
            _, report = cmd_reconstruct(cfg, args.env)
            print(f"mse={report.mse!r} psnr={format_psnr(report.psnr)}")
        elif args.command == "analyze-mc":
            cmd_analyze_mc(cfg)
        elif args.command == "sweep":
            for (family, env), path in cmd_sweep(cfg).items():
                print(f"{family:9s} {env:6s} {path}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
