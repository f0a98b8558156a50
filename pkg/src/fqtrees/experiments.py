"""The acceptance batch as CLI configs (used for the determinism check and scripts/)."""

from __future__ import annotations

from .cli import ExperimentConfig


def acceptance_batch() -> list[ExperimentConfig]:
    cfgs = []
    for q in (3, 5, 7, 9):
        for d in (2, 3):
            cfgs.append(ExperimentConfig("spectrum", q=q, d=d))
            cfgs.append(ExperimentConfig("mixing", q=q, d=d, samples=1000, seed=1000 * q + d))
    for seed in range(20):
        cfgs.append(ExperimentConfig("peel", q=9, d=3, radii="1", C=4.0, set_source=f"random:584:{seed}"))
    for seed in range(10):
        cfgs.append(ExperimentConfig("peel", q=13, d=3, radii="1", set_source=f"random:2100:{seed}"))
    cfgs.append(ExperimentConfig("embed-path", q=9, d=3, radii="1", length=405, colors="constant"))
    cfgs.append(ExperimentConfig("embed-path", q=13, d=3, radii="1,2", length=1192, colors="cyclic"))
    cfgs.append(ExperimentConfig("embed-path", q=5, d=2, length=25, certify=True, validate=True))
    cfgs.append(ExperimentConfig("embed-tree", host="random:10:2:0.8:14", m=1,
                                 tree='{"vertices": 4, "edges": [[0, 1, 0], [1, 2, 1], [2, 3, 0]]}'))
    for q in (3, 7):
        cfgs.append(ExperimentConfig("construct", kind="avoiding", q=q, d=5, slab_k=1, r=1))
        for d in (3, 5):
            cfgs.append(ExperimentConfig("construct", kind="saturating", q=q, d=d, slab_k=1))
            cfgs.append(ExperimentConfig("construct", kind="ikr", q=q, d=d))
    for q in (3, 5, 7):
        for d in (2, 3):
            cfgs.append(ExperimentConfig("incidence", q=q, d=d, samples=500, seed=7 * q + d))
    cfgs.append(ExperimentConfig("probe-conjecture", q=7, d=3, set_source="random:300:0"))
    return cfgs
