"""Monte Carlo photon counting for the shot-noise limit of the amplified angle.

Each trial draws the number of dark-port photons from a Poisson law with mean
``P_d * N`` (coherent light), thins them binomially into the V channel with
probability ``P_V`` and estimates ``theta~ = asin(sqrt(n_V / n_detected))``.

Trial ``i`` uses a PCG64 generator seeded by ``SeedSequence(master_seed,
spawn_key=(i,))``, so every trial is reproducible on its own and the result
does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import ExperimentParams
from .errors import EmptySample, ValidationError


@dataclass(frozen=True)
class McConfig:
    params: ExperimentParams
    trials: int = 2000
    master_seed: int = 42

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 2:
            raise ValidationError("trials must be an integer >= 2")
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError("master_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    mean_theta_tilde: float
    empirical_std: float
    predicted_std: float
    rel_deviation: float
    trials_used: int
    theta_tilde_analytic: float

    @property
    def relative_std(self) -> float:
        """Empirical std over the analytic amplified angle (inverse SNR)."""
        return self.empirical_std / self.theta_tilde_analytic if self.theta_tilde_analytic else math.inf


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(index,)))
    )


def sample_counts(P_d: float, P_V: float, N: float, seed) -> tuple[int, int]:
    """(photons detected at the dark port, photons found V-polarized)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n_detected = int(rng.poisson(P_d * N))
    n_v = int(rng.binomial(n_detected, P_V)) if n_detected else 0
    return n_detected, n_v


def estimate_theta(n_detected: int, n_V: int) -> float:
    if n_detected <= 0:
        raise EmptySample("no photons detected")
    if not 0 <= n_V <= n_detected:
        raise ValueError("need 0 <= n_V <= n_detected")
    return math.asin(math.sqrt(n_V / n_detected))


def run_trials(config: McConfig) -> McEstimate:
    summary = analytic.evaluate(config.params)
    N = config.params.photons_N
    estimates = []
    for i in range(int(config.trials)):
        n_det, n_v = sample_counts(summary.P_d, summary.P_V, N, trial_rng(config.master_seed, i))
        if n_det:
            estimates.append(estimate_theta(n_det, n_v))
    if len(estimates) < 2:
        raise EmptySample("fewer than two trials detected any photon")
    est = np.asarray(estimates)
    empirical = float(np.std(est, ddof=1))
    predicted = 1.0 / (2.0 * math.sqrt(summary.P_d * N))
    return McEstimate(
        mean_theta_tilde=float(np.mean(est)),
        empirical_std=empirical,
        predicted_std=predicted,
        rel_deviation=abs(empirical - predicted) / predicted,
        trials_used=len(estimates),
        theta_tilde_analytic=summary.theta_tilde,
    )
