"""Per-trial, per-stage random streams derived from one global seed."""

import numpy as np

STAGE_IDS = {"keygen": 0, "encrypt": 1, "attack": 2, "control": 3, "verify": 4, "cli": 5}


def stage_rng(seed: int, trial: int, stage: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial), STAGE_IDS[stage]]))
