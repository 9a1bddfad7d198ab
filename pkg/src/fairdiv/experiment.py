"""Random instance generation and the experiment pipeline.

The pipeline mirrors the evaluation setup this toolkit is built around:
generate random instances per item count, run each online mechanism over many
sampled item orders, divide the mean welfares by the exact offline optima of
each instance, and average the resulting ratios across instances.  One CSV
row comes out per (mechanism, item count).

Aggregation across samples is exact; values become 64-bit floats only when a
row is materialized.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .indices import DEFAULT_ENVY_NORM, EnvyNormalization, IndexKind
from .model import FairDivError, Instance
from .online import _derive, sample_online_metrics
from .solvers import max_egalitarian, max_utilitarian

CSV_COLUMNS = (
    "mechanism,n,m,gini,subj_gini,envy,util_ratio,egal_ratio,"
    "sd_gini,sd_subj_gini,sd_envy,sd_util,sd_egal,instances,samples,seed"
)


@dataclass
class ExperimentConfig:
    num_agents: int = 5
    item_counts: tuple[int, ...] = (10, 20, 30, 40, 50, 60, 70, 80, 90, 100)
    max_util: Union[int, str] = "m"
    instance_count: int = 100
    sample_count: int = 100_000
    master_seed: int = 0
    mechanisms: tuple[IndexKind, ...] = (
        IndexKind.GINI,
        IndexKind.SUBJECTIVE_GINI,
        IndexKind.ENVY,
    )
    envy_norm: EnvyNormalization = DEFAULT_ENVY_NORM
    egalitarian_budget: Optional[float] = None
    fixed_order: bool = False

    def __post_init__(self):
        if self.num_agents < 1 or self.instance_count < 1 or self.sample_count < 1:
            raise ValueError("counts must be >= 1")
        if not self.item_counts:
            raise ValueError("item_counts must be nonempty")
        if self.max_util != "m" and (not isinstance(self.max_util, int) or self.max_util < 0):
            raise ValueError("max_util must be 'm' or a non-negative integer")

    def max_util_for(self, m: int) -> int:
        return m if self.max_util == "m" else int(self.max_util)

    def to_dict(self) -> dict:
        return {
            "num_agents": self.num_agents,
            "item_counts": list(self.item_counts),
            "max_util": self.max_util,
            "instance_count": self.instance_count,
            "sample_count": self.sample_count,
            "master_seed": self.master_seed,
            "mechanisms": [k.value for k in self.mechanisms],
            "envy_norm": self.envy_norm.value,
            "egalitarian_budget": self.egalitarian_budget,
            "fixed_order": self.fixed_order,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        kwargs = dict(doc)
        if "item_counts" in kwargs:
            kwargs["item_counts"] = tuple(int(m) for m in kwargs["item_counts"])
        if "mechanisms" in kwargs:
            kwargs["mechanisms"] = tuple(IndexKind(v) for v in kwargs["mechanisms"])
        if "envy_norm" in kwargs:
            kwargs["envy_norm"] = EnvyNormalization(kwargs["envy_norm"])
        return cls(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return ExperimentConfig.from_dict(json.load(fh))


def save_config(config: ExperimentConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2)
        fh.write("\n")


def desk_scale_config(**overrides) -> ExperimentConfig:
    """Small configuration that keeps the exact egalitarian solver snappy."""
    base = dict(
        item_counts=(10, 20, 30),
        instance_count=20,
        sample_count=2000,
        master_seed=20240817,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def paper_scale_config(**overrides) -> ExperimentConfig:
    """Full-size configuration for optional long runs."""
    base = dict(master_seed=20240817, egalitarian_budget=300.0)
    base.update(overrides)
    return ExperimentConfig(**base)


def generate_instance(n: int, m: int, max_util: int, seed: int) -> Instance:
    """Instance with integer bids drawn uniformly from {0, ..., max_util}."""
    if n < 1 or m < 1:
        raise ValueError("need at least one agent and one item")
    if max_util < 0:
        raise ValueError("max_util must be >= 0")
    rng = random.Random(seed)
    bids = tuple(
        tuple(Fraction(rng.randint(0, max_util)) for _ in range(m)) for _ in range(n)
    )
    return Instance(num_agents=n, num_items=m, bids=bids)


@dataclass
class ExperimentRow:
    mechanism: str
    n: int
    m: int
    gini: float
    subj_gini: float
    envy: float
    util_ratio: float
    egal_ratio: float
    sd_gini: float
    sd_subj_gini: float
    sd_envy: float
    sd_util: float
    sd_egal: float
    instances: int
    samples: int
    seed: int
    egal_exact: bool = field(default=True, compare=False)

    def csv_values(self) -> list[str]:
        return [
            self.mechanism,
            str(self.n),
            str(self.m),
            *(f"{v:.6f}" for v in (
                self.gini, self.subj_gini, self.envy, self.util_ratio, self.egal_ratio,
                self.sd_gini, self.sd_subj_gini, self.sd_envy, self.sd_util, self.sd_egal,
            )),
            str(self.instances),
            str(self.samples),
            str(self.seed),
        ]


def _mean_sd(values: Sequence[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    sd = statistics.pstdev(values) if len(values) > 1 else 0.0
    return mean, sd


def run_experiment(
    config: ExperimentConfig, progress: Optional[Callable[[str], None]] = None
) -> list[ExperimentRow]:
    """One row per (mechanism, item count), averaged over fresh random
    instances.  The same instances (and offline optima) are shared by every
    mechanism at a given item count."""

    def note(msg: str) -> None:
        if progress:
            progress(msg)

    rows = []
    n = config.num_agents
    for m in config.item_counts:
        max_util = config.max_util_for(m)
        prepared = []
        for idx in range(config.instance_count):
            inst = generate_instance(
                n, m, max_util, seed=_derive(config.master_seed, "instance", m, idx)
            )
            util_opt, _ = max_utilitarian(inst)
            egal = max_egalitarian(inst, time_budget=config.egalitarian_budget)
            if not egal.optimal:
                note(f"m={m} instance {idx}: egalitarian optimum timed out, using best bound")
            prepared.append((inst, util_opt, egal))
        note(f"m={m}: prepared {len(prepared)} instances")
        for mech in config.mechanisms:
            per_metric: dict[str, list[float]] = {
                key: [] for key in ("gini", "subj", "envy", "util", "egal")
            }
            exact = True
            for idx, (inst, util_opt, egal) in enumerate(prepared):
                run_seed = _derive(config.master_seed, "run", m, idx, mech.value)
                metrics = sample_online_metrics(
                    inst,
                    order=list(range(m)) if config.fixed_order else None,
                    kind=mech,
                    norm=config.envy_norm,
                    samples=config.sample_count,
                    seed=run_seed,
                )
                util_ratio = metrics.utilitarian / util_opt if util_opt > 0 else Fraction(1)
                egal_ratio = metrics.egalitarian / egal.value if egal.value > 0 else Fraction(1)
                exact = exact and egal.optimal
                per_metric["gini"].append(float(metrics.gini))
                per_metric["subj"].append(float(metrics.subjective_gini))
                per_metric["envy"].append(float(metrics.envy))
                per_metric["util"].append(float(util_ratio))
                per_metric["egal"].append(float(egal_ratio))
            means_sds = {key: _mean_sd(vals) for key, vals in per_metric.items()}
            rows.append(
                ExperimentRow(
                    mechanism=mech.value,
                    n=n,
                    m=m,
                    gini=means_sds["gini"][0],
                    subj_gini=means_sds["subj"][0],
                    envy=means_sds["envy"][0],
                    util_ratio=means_sds["util"][0],
                    egal_ratio=means_sds["egal"][0],
                    sd_gini=means_sds["gini"][1],
                    sd_subj_gini=means_sds["subj"][1],
                    sd_envy=means_sds["envy"][1],
                    sd_util=means_sds["util"][1],
                    sd_egal=means_sds["egal"][1],
                    instances=config.instance_count,
                    samples=config.sample_count,
                    seed=config.master_seed,
                    egal_exact=exact,
                )
            )
            note(f"m={m} mechanism={mech.value}: done")
    return rows


def write_csv(rows: Sequence[ExperimentRow], destination) -> None:
    """Header plus one line per row, LF endings, 6 fractional digits."""
    if hasattr(destination, "write"):
        _write_csv_stream(rows, destination)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write_csv_stream(rows, fh)


def _write_csv_stream(rows, fh) -> None:
    fh.write(CSV_COLUMNS + "\n")
    for row in rows:
        fh.write(",".join(row.csv_values()) + "\n")


def read_csv(path) -> list[ExperimentRow]:
    """Parse a CSV produced by :func:`write_csv` (floats as written)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != CSV_COLUMNS:
        raise FairDivError("unexpected CSV header")
    out = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 16:
            raise FairDivError(f"malformed CSV line: {line!r}")
        out.append(
            ExperimentRow(
                mechanism=parts[0],
                n=int(parts[1]),
                m=int(parts[2]),
                gini=float(parts[3]),
                subj_gini=float(parts[4]),
                envy=float(parts[5]),
                util_ratio=float(parts[6]),
                egal_ratio=float(parts[7]),
                sd_gini=float(parts[8]),
                sd_subj_gini=float(parts[9]),
                sd_envy=float(parts[10]),
                sd_util=float(parts[11]),
                sd_egal=float(parts[12]),
                instances=int(parts[13]),
                samples=int(parts[14]),
                seed=int(parts[15]),
            )
        )
    return out
