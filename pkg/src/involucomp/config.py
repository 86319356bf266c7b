"""Frozen run configurations shared by the CLI and the scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

from . import experiments
from .experiments import ExperimentReport

EXPERIMENTS = ("kcycles", "cycles", "fpf", "lengthlaw", "lognormal", "components", "factorization")


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo run. ``n`` is the ground-set size (even for fpf and
    lengthlaw). ``k`` is the cycle length for kcycles and the fixed-point
    count of sigma for components, where ``l`` defaults to ``k``."""

    name: str
    n: int
    trials: int
    seed: int
    k: int | None = None
    l: int | None = None
    gamma: float = 0.125
    delta: float = 0.375
    r_max: int = 10

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.name!r}; choose from {', '.join(EXPERIMENTS)}")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def run(self) -> ExperimentReport:
        n, T, seed = self.n, self.trials, self.seed
        if self.name == "kcycles":
            return experiments.run_k_cycle_experiment(n, self.k or 1, T, seed)
        if self.name == "cycles":
            return experiments.run_total_cycles_experiment(n, T, seed)
        if self.name == "fpf":
            return experiments.run_fpf_experiment(n, T, seed)
        if self.name == "lengthlaw":
            return experiments.run_length_law_experiment(n, self.gamma, self.delta, T, seed)
        if self.name == "lognormal":
            return experiments.run_lognormal_experiment(n, T, seed)
        if self.name == "components":
            k = self.k if self.k is not None else 0
            l = self.l if self.l is not None else k
            return experiments.run_fixed_point_component_experiment(n, k, l, self.r_max, T, seed)
        return experiments.run_uniform_factorization_experiment(n, T, seed)


@dataclass(frozen=True)
class LimitLawSuite:
    """A batch of experiments run in order, as used by scripts/run_limit_laws.py."""

    seed: int
    runs: tuple[ExperimentConfig, ...] = field(default_factory=tuple)

    @classmethod
    def default(cls, seed: int = 2024, scale: float = 1.0) -> "LimitLawSuite":
        def T(trials: int) -> int:
            return max(1, int(trials * scale))

        runs = [ExperimentConfig("kcycles", 1000, T(100_000), seed, k=k) for k in (1, 2, 3)]
        runs += [
            ExperimentConfig("cycles", 400, T(100_000), seed),
            ExperimentConfig("fpf", 4, T(100_000), seed),
            ExperimentConfig("fpf", 1000, T(100_000), seed),
            ExperimentConfig("lengthlaw", 2000, T(100_000), seed),
            ExperimentConfig("components", 2000, T(2_000), seed, k=200, l=200, r_max=10),
            ExperimentConfig("lognormal", 10**6, T(10_000), seed),
            ExperimentConfig("factorization", 1000, T(5_000), seed),
        ]
        return cls(seed, tuple(runs))

    def run(self, names: Sequence[str] | None = None) -> list[ExperimentReport]:
        return [c.run() for c in self.runs if names is None or c.name in names]
