"""Random generation of photon-pair scattering events.

Every event carries a polarization frame: the first photon's assumed
initial polarization angle big_phi, uniform on [0, 2 pi), and a uniform
sign choosing whether the second photon's orthogonal polarization sits at
big_phi + pi/2 or big_phi - pi/2.  Azimuths transform between the frames as

    fixed  = (pol + big_phi) mod 2 pi              (photon 1)
    fixed  = (pol + big_phi +- pi/2) mod 2 pi      (photon 2)

with the inverse transforms subtracting the same shifts.  Because every
density depends on azimuths only through cos 2(.), the sign choice never
affects a statistic; it is still sampled and stored so that generated
events describe the full semi-classical picture.

All samplers are plain rejection samplers with constant envelopes:

* single photon: bracket F - G cos 2 phi <= sup(F + G) = 2;
* photon 2 given photon 1 (conditional): bracket <= 2 F1 + G1/3, and for
  the reconciled model bracket <= 2 (F1 - G1 cos 2 phi1) + G1/3;
* all four angles at once: pair brackets <= (F1 + G1)(F2 + G2) <= 4, with
  an interval-arithmetic widening for nonzero ansatz parameters.

The 4D samplers accept about Fint^2/16 = 8.2% of proposals; acceptance
rates are logged and reported in the event metadata.

Reproducibility: a RandomStream is a counter-based Philox generator keyed
by (seed, stream_index), so equal keys give equal sample sequences.
run_pipeline partitions its event budget across `workers` such streams and
reassembles results by partition index, making output a pure function of
(model, n, seed, workers) regardless of execution order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import models
from .kinematics import G_MAX, SUM_FG_MAX, TWO_PI, fg
from .models import ModelKind, ModelSpec, ScatterAngles

logger = logging.getLogger(__name__)

#: Additive safety margin on every rejection envelope.
ENVELOPE_MARGIN = 1e-9

#: Pipeline name for the staged procedure: photon 1 by Klein-Nishina,
#: photon 2 from the conditional fixed-frame Pryce-Ward density.
PW_DIRECT = "pw-direct"

#: Staged counterpart of the reconciled model (equivalent to sampling all
#: four angles at once; kept for the equivalence checks).
RECOMMENDED_STAGED = "recommended-staged"

#: Names accepted by run_pipeline in addition to any ModelSpec.
PIPELINE_NAMES = (
    "kn-independent",
    PW_DIRECT,
    "pw-joint",
    "naive-phi",
    "recommended",
    "ansatz",
    RECOMMENDED_STAGED,
)


class OrthSign(IntEnum):
    """Side of the second photon's orthogonal polarization: big_phi +- pi/2."""

    PLUS = 1
    MINUS = -1


@dataclass(frozen=True)
class PolarizationFrame:
    """Assumed initial polarizations of one event (or a batch of events).

    big_phi is the first photon's polarization angle relative to the fixed
    x-axis, normalized into [0, 2 pi); orth_sign the +-1 orthogonality side
    for the second photon.  Fields may be scalars or equal-length arrays.
    """

    big_phi: object
    orth_sign: object

    def __post_init__(self):
        phi = np.mod(np.asarray(self.big_phi, dtype=float), TWO_PI)
        sign = np.asarray(self.orth_sign, dtype=np.int8)
        if not np.all(np.abs(sign) == 1):
            raise ValueError("orth_sign entries must be +1 or -1")
        if phi.ndim == 0:
            phi = float(phi)
            sign = OrthSign(int(sign))
        object.__setattr__(self, "big_phi", phi)
        object.__setattr__(self, "orth_sign", sign)


@dataclass(frozen=True)
class PairEvent:
    """A full two-photon scattering event, or a batch of them.

    photon1/photon2 hold polarization-relative azimuths; fixed1_phi and
    fixed2_phi the same azimuths in the fixed coordinate frame, related by
    the frame shifts.  meta carries sampler bookkeeping (model name, seed,
    acceptance rate) and never participates in comparisons.
    """

    frame: PolarizationFrame
    photon1: ScatterAngles
    photon2: ScatterAngles
    fixed1_phi: object
    fixed2_phi: object
    meta: dict = field(default=None, compare=False)

    def __len__(self) -> int:
        return int(np.size(self.fixed1_phi))

    def __getitem__(self, i: int) -> "PairEvent":
        return PairEvent(
            frame=PolarizationFrame(
                np.asarray(self.frame.big_phi)[i],
                np.asarray(self.frame.orth_sign)[i],
            ),
            photon1=ScatterAngles(np.asarray(self.photon1.chi)[i], np.asarray(self.photon1.phi)[i]),
            photon2=ScatterAngles(np.asarray(self.photon2.chi)[i], np.asarray(self.photon2.phi)[i]),
            fixed1_phi=float(np.asarray(self.fixed1_phi)[i]),
            fixed2_phi=float(np.asarray(self.fixed2_phi)[i]),
        )


class RandomStream:
    """A reproducible Philox stream derived from (seed, stream_index).

    The pair keys the counter-based Philox bit generator, so identical
    pairs reproduce identical sequences and distinct stream indices give
    statistically independent streams.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        if seed < 0 or stream_index < 0:
            raise ValueError("seed and stream_index must be non-negative")
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        key = np.array([self.seed, self.stream_index], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))


def _gen(rng) -> np.random.Generator:
    """Accept a RandomStream or a bare numpy Generator."""
    return rng.generator if isinstance(rng, RandomStream) else rng


# ---------------------------------------------------------------------------
# frame transformations

def _frame_shift(frame: PolarizationFrame, which_photon: int):
    if which_photon == 1:
        return np.asarray(frame.big_phi, dtype=float)
    if which_photon == 2:
        sign = np.asarray(frame.orth_sign, dtype=float)
        return np.asarray(frame.big_phi, dtype=float) + sign * (np.pi / 2.0)
    raise ValueError("which_photon must be 1 or 2")


def to_fixed_frame(phi, frame: PolarizationFrame, which_photon: int):
    """Polarization-relative azimuth -> fixed-frame azimuth in [0, 2 pi)."""
    out = np.mod(np.asarray(phi, dtype=float) + _frame_shift(frame, which_photon), TWO_PI)
    return out if out.ndim else float(out)


def to_polarization_frame(varphi, frame: PolarizationFrame, which_photon: int):
    """Fixed-frame azimuth -> polarization-relative azimuth in [0, 2 pi)."""
    out = np.mod(np.asarray(varphi, dtype=float) - _frame_shift(frame, which_photon), TWO_PI)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# elementary samplers

def sample_frame(rng, size=None) -> PolarizationFrame:
    """Uniform big_phi on [0, 2 pi) and an independent uniform +-1 sign."""
    gen = _gen(rng)
    big_phi = gen.uniform(0.0, TWO_PI, size)
    sign = np.where(gen.integers(0, 2, size) == 1, 1, -1).astype(np.int8)
    return PolarizationFrame(big_phi, sign)


def sample_kn(rng, size=None) -> ScatterAngles:
    """Draw (chi, phi) from the single-photon Klein-Nishina density.

    Constant-envelope rejection: proposals uniform on the domain, accepted
    with probability (F - G cos 2 phi)/2.  Acceptance is Fint/4, about 29%.
    """
    gen = _gen(rng)
    n = 1 if size is None else int(size)
    envelope = SUM_FG_MAX + ENVELOPE_MARGIN
    chi = np.empty(n)
    phi = np.empty(n)
    got = 0
    while got < n:
        m = max(int((n - got) / 0.28 * 1.05) + 16, 64)
        c = gen.uniform(-1.0, 1.0, m)
        p = gen.uniform(0.0, TWO_PI, m)
        u = gen.uniform(0.0, 1.0, m)
        keep = np.nonzero(u * envelope <= models.kn_bracket(c, p))[0]
        take = min(keep.size, n - got)
        chi[got : got + take] = c[keep[:take]]
        phi[got : got + take] = p[keep[:take]]
        got += take
    if size is None:
        return ScatterAngles(chi[0], phi[0])
    return ScatterAngles(chi, phi)


def _conditional_second(gen, chi1, phi1, bracket, envelope):
    """Rejection-sample photon-2 angles row by row against `bracket`.

    bracket(c2, p2, rows) evaluates the conditional bracket for proposal
    angles of the still-pending rows; envelope is the per-row constant
    bound.  Each round draws one proposal per pending row.
    """
    n = chi1.size
    chi2 = np.empty(n)
    phi2 = np.empty(n)
    pending = np.arange(n)
    while pending.size:
        m = pending.size
        c = gen.uniform(-1.0, 1.0, m)
        p = gen.uniform(0.0, TWO_PI, m)
        u = gen.uniform(0.0, 1.0, m)
        acc = u * envelope[pending] <= bracket(c, p, pending)
        hit = pending[acc]
        chi2[hit] = c[acc]
        phi2[hit] = p[acc]
        pending = pending[~acc]
    return chi2, phi2


def sample_pw_conditional(rng, fixed1: ScatterAngles) -> ScatterAngles:
    """Photon 2 from the conditional fixed-frame Pryce-Ward density.

    fixed1 holds photon 1's angles with the azimuth in the *fixed* frame;
    the result is photon 2's angles in the same frame, distributed as
    (F1 F2 - G1 G2 cos 2(phi2 - phi1)) / (2 pi Fint F1).  Envelope
    2 F1 + G1/3 per row.
    """
    gen = _gen(rng)
    scalar = np.ndim(fixed1.chi) == 0
    chi1 = np.atleast_1d(np.asarray(fixed1.chi, dtype=float))
    phi1 = np.atleast_1d(np.asarray(fixed1.phi, dtype=float))
    f1, g1 = fg(chi1)
    envelope = 2.0 * f1 + g1 * G_MAX + ENVELOPE_MARGIN

    def bracket(c, p, rows):
        return models.pw_bracket(chi1[rows], phi1[rows], c, p)

    chi2, phi2 = _conditional_second(gen, chi1, phi1, bracket, envelope)
    if scalar:
        return ScatterAngles(chi2[0], phi2[0])
    return ScatterAngles(chi2, phi2)


def sample_recommended_conditional(rng, first: ScatterAngles) -> ScatterAngles:
    """Photon 2 from the reconciled density conditioned on photon 1.

    first holds polarization-relative angles; the conditional density is
    the reconciled joint divided by photon 1's Klein-Nishina density, with
    per-row envelope 2 (F1 - G1 cos 2 phi1) + G1/3.
    """
    gen = _gen(rng)
    scalar = np.ndim(first.chi) == 0
    chi1 = np.atleast_1d(np.asarray(first.chi, dtype=float))
    phi1 = np.atleast_1d(np.asarray(first.phi, dtype=float))
    _, g1 = fg(chi1)
    envelope = 2.0 * models.kn_bracket(chi1, phi1) + g1 * G_MAX + ENVELOPE_MARGIN

    def bracket(c, p, rows):
        return models.recommended_bracket(chi1[rows], phi1[rows], c, p)

    chi2, phi2 = _conditional_second(gen, chi1, phi1, bracket, envelope)
    if scalar:
        return ScatterAngles(chi2[0], phi2[0])
    return ScatterAngles(chi2, phi2)


def _sample_pair_angles(gen, bracket, envelope, n, acc_guess=0.08, chunk=2_000_000):
    """Accept n draws of (chi1, phi1, chi2, phi2) from a 4D pair bracket."""
    cols = tuple(np.empty(n) for _ in range(4))
    got = 0
    proposed = 0
    accepted = 0
    while got < n:
        m = min(chunk, max(int((n - got) / acc_guess * 1.05) + 16, 64))
        c1 = gen.uniform(-1.0, 1.0, m)
        p1 = gen.uniform(0.0, TWO_PI, m)
        c2 = gen.uniform(-1.0, 1.0, m)
        p2 = gen.uniform(0.0, TWO_PI, m)
        u = gen.uniform(0.0, 1.0, m)
        keep = np.nonzero(u * envelope <= bracket(c1, p1, c2, p2))[0]
        take = min(keep.size, n - got)
        sel = keep[:take]
        for col, arr in zip(cols, (c1, p1, c2, p2)):
            col[got : got + take] = arr[sel]
        got += take
        proposed += m
        accepted += keep.size
    acceptance = accepted / proposed
    logger.debug(
        "4D rejection sampler: %d / %d proposals accepted (%.4f)", accepted, proposed, acceptance
    )
    return cols, acceptance


_PAIR_BRACKETS = {
    ModelKind.PW_FIXED_FRAME: models.pw_bracket,
    ModelKind.NAIVE_PHI: models.naive_bracket,
    ModelKind.RECOMMENDED: models.recommended_bracket,
}

#: Feasibility tolerance for ansatz members (absorbs float noise at zero).
FEASIBILITY_TOL = -1e-12


def _require_feasible(model: ModelSpec):
    low = models.ansatz_min_density(model.b_ff, model.b_gg)
    if low < FEASIBILITY_TOL:
        raise ValueError(
            f"ansatz parameters (b_ff={model.b_ff}, b_gg={model.b_gg}) give a "
            f"density minimum {low:.3e} < 0; not sampleable"
        )


def sample_joint(rng, model: ModelSpec, size=None) -> PairEvent:
    """Draw full pair events under a ModelSpec, all four angles at once.

    A fresh polarization frame is drawn for every event, and both azimuth
    representations are stored.  For PW_FIXED_FRAME the sampled azimuths
    are fixed-frame angles (the polarization-relative ones derived from
    them); for all other kinds the reverse.  Ansatz members are refused
    unless their density minimum is non-negative.
    """
    gen = _gen(rng)
    n = 1 if size is None else int(size)
    if n < 1:
        raise ValueError("size must be at least 1")
    model = ModelSpec(model.kind, model.b_ff, model.b_gg)
    frame = sample_frame(gen, n)

    meta = {"model": model.name}
    if model.kind is ModelKind.KN_INDEPENDENT:
        a1 = sample_kn(gen, n)
        a2 = sample_kn(gen, n)
        event = _assemble_polarization_relative(frame, a1, a2, meta)
    elif model.kind is ModelKind.PW_FIXED_FRAME:
        (c1, vp1, c2, vp2), acc = _sample_pair_angles(
            gen, models.pw_bracket, 4.0 + ENVELOPE_MARGIN, n
        )
        meta["acceptance"] = acc
        phi1 = to_polarization_frame(vp1, frame, 1)
        phi2 = to_polarization_frame(vp2, frame, 2)
        event = PairEvent(
            frame=frame,
            photon1=ScatterAngles(c1, phi1),
            photon2=ScatterAngles(c2, phi2),
            fixed1_phi=vp1,
            fixed2_phi=vp2,
            meta=meta,
        )
    else:
        if model.kind is ModelKind.ANSATZ_FAMILY:
            _require_feasible(model)
            bracket = lambda c1, p1, c2, p2: models.ansatz_bracket(
                c1, p1, c2, p2, model.b_ff, model.b_gg
            )
            envelope = models.ansatz_envelope(model.b_ff, model.b_gg) + ENVELOPE_MARGIN
        else:
            bracket = _PAIR_BRACKETS[model.kind]
            envelope = 4.0 + ENVELOPE_MARGIN
        (c1, p1, c2, p2), acc = _sample_pair_angles(gen, bracket, envelope, n)
        meta["acceptance"] = acc
        event = _assemble_polarization_relative(
            frame, ScatterAngles(c1, p1), ScatterAngles(c2, p2), meta
        )
    return event[0] if size is None else event


def _assemble_polarization_relative(frame, a1, a2, meta) -> PairEvent:
    return PairEvent(
        frame=frame,
        photon1=a1,
        photon2=a2,
        fixed1_phi=to_fixed_frame(a1.phi, frame, 1),
        fixed2_phi=to_fixed_frame(a2.phi, frame, 2),
        meta=meta,
    )


def sample_pw_direct(rng, size=None) -> PairEvent:
    """The staged direct Pryce-Ward procedure.

    Frame first; photon 1 from Klein-Nishina (polarization-relative);
    photon 2 from the conditional fixed-frame Pryce-Ward density with
    photon 1's fixed-frame angles as parameters.  Its second-photon
    polarization-relative marginal carries the suppressed modulation.
    """
    gen = _gen(rng)
    n = 1 if size is None else int(size)
    frame = sample_frame(gen, n)
    a1 = sample_kn(gen, n)
    vphi1 = to_fixed_frame(a1.phi, frame, 1)
    fixed2 = sample_pw_conditional(gen, ScatterAngles(a1.chi, vphi1))
    phi2 = to_polarization_frame(fixed2.phi, frame, 2)
    event = PairEvent(
        frame=frame,
        photon1=a1,
        photon2=ScatterAngles(fixed2.chi, phi2),
        fixed1_phi=vphi1,
        fixed2_phi=fixed2.phi,
        meta={"model": PW_DIRECT},
    )
    return event[0] if size is None else event


def sample_recommended_staged(rng, size=None) -> PairEvent:
    """Photon 1 from Klein-Nishina, photon 2 from the reconciled conditional.

    Distributionally identical to sample_joint with the recommended model.
    """
    gen = _gen(rng)
    n = 1 if size is None else int(size)
    frame = sample_frame(gen, n)
    a1 = sample_kn(gen, n)
    a2 = sample_recommended_conditional(gen, a1)
    event = _assemble_polarization_relative(frame, a1, a2, {"model": RECOMMENDED_STAGED})
    return event[0] if size is None else event


# ---------------------------------------------------------------------------
# the pipeline driver

def _resolve(model) -> tuple:
    """Return (callable(gen, n) -> PairEvent, name) for a model or name."""
    if isinstance(model, ModelSpec):
        return (lambda gen, n: sample_joint(gen, model, n)), model.name
    name = str(model)
    if name == PW_DIRECT:
        return sample_pw_direct, name
    if name == RECOMMENDED_STAGED:
        return sample_recommended_staged, name
    spec = ModelSpec.from_name(name)
    return (lambda gen, n: sample_joint(gen, spec, n)), name


def _partition(n: int, workers: int):
    base, rem = divmod(n, workers)
    return [base + (1 if i < rem else 0) for i in range(workers)]


def _concat_events(parts) -> PairEvent:
    cat = lambda pick: np.concatenate([np.atleast_1d(pick(p)) for p in parts])
    return PairEvent(
        frame=PolarizationFrame(
            cat(lambda p: p.frame.big_phi), cat(lambda p: p.frame.orth_sign)
        ),
        photon1=ScatterAngles(cat(lambda p: p.photon1.chi), cat(lambda p: p.photon1.phi)),
        photon2=ScatterAngles(cat(lambda p: p.photon2.chi), cat(lambda p: p.photon2.phi)),
        fixed1_phi=cat(lambda p: p.fixed1_phi),
        fixed2_phi=cat(lambda p: p.fixed2_phi),
    )


def run_pipeline(model, n: int, seed: int, workers: int = 1) -> PairEvent:
    """Generate exactly n events, reproducibly partitioned across workers.

    model is a ModelSpec or a pipeline name from PIPELINE_NAMES.  Partition
    i draws its share from RandomStream(seed, i); results are concatenated
    in partition order, so the output is byte-identical for equal
    (model, n, seed, workers) no matter how the partitions are scheduled.
    """
    if n < 1:
        raise ValueError("event count must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    sampler, name = _resolve(model)
    counts = _partition(n, workers)

    def job(i):
        if counts[i] == 0:
            return None
        return sampler(RandomStream(seed, i).generator, counts[i])

    if workers == 1:
        parts = [job(0)]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, 8)) as pool:
            parts = list(pool.map(job, range(workers)))
    parts = [p for p in parts if p is not None]
    merged = _concat_events(parts)

    with_acc = [p for p in parts if p.meta and "acceptance" in p.meta]
    meta = {"model": name, "n": n, "seed": seed, "workers": workers}
    if with_acc:
        meta["acceptance"] = float(
            np.average(
                [p.meta["acceptance"] for p in with_acc],
                weights=[len(p) for p in with_acc],
            )
        )
        logger.info("pipeline %s: %d events, acceptance %.4f", name, n, meta["acceptance"])
    return PairEvent(
        frame=merged.frame,
        photon1=merged.photon1,
        photon2=merged.photon2,
        fixed1_phi=merged.fixed1_phi,
        fixed2_phi=merged.fixed2_phi,
        meta=meta,
    )
