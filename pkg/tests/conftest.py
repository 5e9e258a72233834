"""Shared fixtures: heavy pipeline runs are done once per session.

Each 1e7-event pipeline is reduced to summary statistics immediately so at
most one event batch is alive at a time.
"""

from dataclasses import dataclass

import numpy as np
import pytest

import paircompton as pc
from paircompton import analysis

ACCEPT_N = 10_000_000
ACCEPT_SEED = 20250811
PIPELINES = ("kn-independent", "pw-direct", "pw-joint", "recommended")


@dataclass(frozen=True)
class PipelineStats:
    name: str
    n: int
    est1: analysis.ModulationEstimate
    est2: analysis.ModulationEstimate
    delta_pol: float
    delta_pol_err: float
    delta_fixed: float
    delta_fixed_err: float
    hist_phi2: analysis.Histogram
    acceptance: float


def summarize(events, bins: int = 64) -> PipelineStats:
    d_pol = np.cos(2.0 * (np.asarray(events.photon2.phi) - np.asarray(events.photon1.phi)))
    d_fix = np.cos(2.0 * (np.asarray(events.fixed2_phi) - np.asarray(events.fixed1_phi)))
    return PipelineStats(
        name=events.meta["model"],
        n=len(events),
        est1=analysis.estimate_modulation(events.photon1.phi),
        est2=analysis.estimate_modulation(events.photon2.phi),
        delta_pol=2.0 * float(d_pol.mean()),
        delta_pol_err=2.0 * float(np.sqrt(d_pol.var(ddof=1) / d_pol.size)),
        delta_fixed=2.0 * float(d_fix.mean()),
        delta_fixed_err=2.0 * float(np.sqrt(d_fix.var(ddof=1) / d_fix.size)),
        hist_phi2=analysis.histogram_phi(events, selector="phi2", bins=bins),
        acceptance=float(events.meta.get("acceptance", np.nan)),
    )


@pytest.fixture(scope="session")
def pipeline_stats():
    out = {}
    for name in PIPELINES:
        events = pc.run_pipeline(name, ACCEPT_N, seed=ACCEPT_SEED)
        out[name] = summarize(events)
        del events
    return out
