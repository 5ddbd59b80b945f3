"""Sum-product syndrome decoding of CSS codes and the Monte Carlo harness."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from pg_qldpc.configuration import Configuration
from pg_qldpc.css import CssCode
from pg_qldpc.gf2 import BitMatrix, BitVector, RowReducer, ShapeMismatchError
from pg_qldpc.state import CurvePoint, MonteCarloCurve
from pg_qldpc.utils import run_partitioned

WILSON_Z = 1.959963984540054
CSV_COLUMNS = [
    "p",
    "trials",
    "failures",
    "rate",
    "ci_low",
    "ci_high",
    "exact_recoveries",
    "exact_recovery_rate",
    "non_converged",
]


##########################
# Errors and channel
##########################

@dataclass(frozen=True)
class PauliErrorVector:
    """X and Z components of a Pauli error; a qubit with both set carries Y."""

    e_x: BitVector
    e_z: BitVector

    def __post_init__(self):
        """Reject components of different lengths."""
        if self.e_x.length != self.e_z.length:
            raise ShapeMismatchError("x and z components must have equal length")

    @property
    def n(self) -> int:
        """Number of qubits."""
        return self.e_x.length

    @classmethod
    def identity(cls, n: int) -> "PauliErrorVector":
        """Return the error-free Pauli on n qubits."""
        return cls(BitVector(n), BitVector(n))

    @classmethod
    def single(cls, n: int, qubit: int, pauli: str) -> "PauliErrorVector":
        """Return the weight-one error ``pauli`` in {"X", "Y", "Z"} on ``qubit``."""
        if pauli not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {pauli!r}")
        x = BitVector.from_support(n, [qubit] if pauli in ("X", "Y") else [])
        z = BitVector.from_support(n, [qubit] if pauli in ("Y", "Z") else [])
        return cls(x, z)

    def __xor__(self, other: "PauliErrorVector") -> "PauliErrorVector":
        """Compose two Paulis up to phase."""
        return PauliErrorVector(self.e_x ^ other.e_x, self.e_z ^ other.e_z)


@dataclass(frozen=True)
class ChannelModel:
    """I.i.d. depolarizing noise: X, Y and Z each with probability p/3."""

    p: float

    def __post_init__(self):
        """Reject probabilities outside [0, 1]."""
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability {self.p} outside [0, 1]")

    @property
    def marginal(self) -> float:
        """Probability that a given component (x or z) of a qubit is flipped."""
        return 2.0 * self.p / 3.0


def sample_error(channel: ChannelModel, n: int, rng: np.random.Generator) -> PauliErrorVector:
    """Draw an i.i.d. depolarizing error on n qubits."""
    hit = rng.random(n) < channel.p
    kind = rng.integers(0, 3, size=n)  # 0: X, 1: Y, 2: Z
    x = hit & (kind != 2)
    z = hit & (kind != 0)
    return PauliErrorVector(BitVector.from_array(x), BitVector.from_array(z))


def syndrome(code: CssCode, e: PauliErrorVector) -> tuple[BitVector, BitVector]:
    """Return ``(H_X·e_z, H_Z·e_x)``: X checks see Z components and vice versa."""
    if e.n != code.n:
        raise ShapeMismatchError(f"error on {e.n} qubits for a code of length {code.n}")
    return code.H_X.H.multiply_vector(e.e_z), code.H_Z.H.multiply_vector(e.e_x)


##########################
# Sum-product decoder
##########################

@dataclass(frozen=True)
class DecodeResult:
    """Hard decision of one sector decoder."""

    estimate: BitVector
    converged: bool
    iterations: int


class SumProductDecoder:
    """Flooding sum-product decoder in log-likelihood-ratio form for one matrix."""

    def __init__(self, H: BitMatrix, max_iters: int = 100, clip: float = 25.0, damping: float = 0.7):
        """Prepare the check mask of H and the message schedule settings."""
        self.H = H
        self.mask = H.to_numpy().astype(bool)
        self.checks = self.mask.astype(np.int64)
        self.max_iters = max_iters
        self.clip = clip
        self.damping = damping

    def _prior_llr(self, prior: Union[float, np.ndarray]) -> np.ndarray:
        p = np.clip(np.broadcast_to(np.asarray(prior, dtype=float), (self.H.n_cols,)), 1e-12, 1 - 1e-12)
        return np.clip(np.log((1.0 - p) / p), -self.clip, self.clip)

    def _satisfies(self, hard: np.ndarray, target: np.ndarray) -> bool:
        return bool(np.array_equal((self.checks @ hard) % 2, target))

    def _check_messages(self, v2c: np.ndarray, sign: np.ndarray) -> np.ndarray:
        t = np.where(self.mask, np.tanh(0.5 * v2c), 1.0)
        ones = np.ones((t.shape[0], 1))
        left = np.cumprod(np.hstack([ones, t[:, :-1]]), axis=1)
        right = np.cumprod(np.hstack([ones, t[:, :0:-1]]), axis=1)[:, ::-1]
        product = np.clip(sign[:, None] * left * right, -1 + 1e-15, 1 - 1e-15)
        return np.where(self.mask, np.clip(2.0 * np.arctanh(product), -self.clip, self.clip), 0.0)

    def decode(self, s: BitVector, prior: Union[float, np.ndarray]) -> DecodeResult:
        """Estimate an error pattern with syndrome ``s``."""
        if s.length != self.H.n_rows:
            raise ShapeMismatchError(f"syndrome of length {s.length} for {self.H.n_rows} checks")
        n = self.H.n_cols
        target = s.to_array().astype(np.int64)
        llr = self._prior_llr(prior)
        hard = (llr < 0).astype(np.int64)
        if self._satisfies(hard, target):
            return DecodeResult(BitVector.from_array(hard), True, 0)

        sign = 1.0 - 2.0 * target
        v2c = np.where(self.mask, llr[None, :], 0.0)
        c2v = np.zeros_like(v2c)
        for iteration in range(1, self.max_iters + 1):
            fresh = self._check_messages(v2c, sign)
            c2v = fresh if iteration == 1 else self.damping * c2v + (1.0 - self.damping) * fresh
            posterior = llr + c2v.sum(axis=0)
            hard = (posterior < 0).astype(np.int64)
            if self._satisfies(hard, target):
                return DecodeResult(BitVector.from_array(hard), True, iteration)
            v2c = np.where(self.mask, np.clip(posterior[None, :] - c2v, -self.clip, self.clip), 0.0)
        logging.debug(f"sum-product did not converge within {self.max_iters} iterations on {n} bits")
        return DecodeResult(BitVector.from_array(hard), False, self.max_iters)


def bp_decode(
    H: BitMatrix,
    s: BitVector,
    prior: Union[float, np.ndarray],
    max_iters: int = 100,
    clip: float = 25.0,
    damping: float = 0.7,
) -> DecodeResult:
    """Run the sum-product decoder of H once on syndrome s."""
    return SumProductDecoder(H, max_iters, clip, damping).decode(s, prior)


##########################
# CSS decoding
##########################

@dataclass(frozen=True)
class TrialOutcome:
    """Result of decoding one error in both sectors."""

    converged: bool
    logical_failure: bool
    exact_recovery: bool
    iterations_used: int


class CssDecoder:
    """Both sector decoders and stabilizer membership tests for one code."""

    def __init__(self, code: CssCode, config: Optional[Configuration] = None):
        """Build both sector decoders with the configured settings."""
        config = config or Configuration()
        settings = (config.bp_max_iters, config.bp_clip, config.bp_damping)
        self.code = code
        # X components are checked by H_Z; Z components by H_X.
        self.x_sector = SumProductDecoder(code.H_Z.H, *settings)
        self.z_sector = SumProductDecoder(code.H_X.H, *settings)
        self.x_stabilizers = RowReducer(code.H_X.H)
        self.z_stabilizers = self.x_stabilizers if code.symmetric else RowReducer(code.H_Z.H)

    def decode_error(self, error: PauliErrorVector, p: float) -> TrialOutcome:
        """Decode both sectors and classify the residual."""
        s_x, s_z = syndrome(self.code, error)
        prior = ChannelModel(p).marginal
        est_x = self.x_sector.decode(s_z, prior)
        est_z = self.z_sector.decode(s_x, prior)
        r_x = error.e_x ^ est_x.estimate
        r_z = error.e_z ^ est_z.estimate
        converged = est_x.converged and est_z.converged
        harmless = self.x_stabilizers.contains(r_x.bits) and self.z_stabilizers.contains(r_z.bits)
        return TrialOutcome(
            converged=converged,
            logical_failure=not (converged and harmless),
            exact_recovery=converged and r_x.weight == 0 and r_z.weight == 0,
            iterations_used=max(est_x.iterations, est_z.iterations),
        )


def decode_error(code: CssCode, error: PauliErrorVector, p: float, config: Optional[Configuration] = None) -> TrialOutcome:
    """Decode a given error; residuals that are stabilizers count as success."""
    return CssDecoder(code, config).decode_error(error, p)


def trial_rng(master_seed: int, grid_index: int, trial: int) -> np.random.Generator:
    """Return the generator for one trial, independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, grid_index, trial]))


def decode_trial(
    code: CssCode,
    channel: ChannelModel,
    seed: tuple[int, int, int],
    config: Optional[Configuration] = None,
    decoder: Optional[CssDecoder] = None,
) -> TrialOutcome:
    """Sample an error from a seed tuple and decode it."""
    decoder = decoder or CssDecoder(code, config)
    rng = trial_rng(*seed)
    error = sample_error(channel, code.n, rng)
    return decoder.decode_error(error, channel.p)


##########################
# Monte Carlo harness
##########################

def wilson_interval(failures: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Return the Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("the interval needs at least one trial")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _run_chunk(code: CssCode, p: float, grid_index: int, start: int, stop: int, master_seed: int, config: Configuration) -> tuple[int, int, int]:
    decoder = CssDecoder(code, config)
    channel = ChannelModel(p)
    failures = exact = non_converged = 0
    for t in range(start, stop):
        outcome = decode_trial(code, channel, (master_seed, grid_index, t), decoder=decoder)
        failures += outcome.logical_failure
        exact += outcome.exact_recovery
        non_converged += not outcome.converged
    return failures, exact, non_converged


def run_monte_carlo(
    code: CssCode,
    p_grid: Sequence[float],
    trials_per_point: int,
    master_seed: int,
    config: Optional[Configuration] = None,
) -> MonteCarloCurve:
    """Estimate the logical error rate at every grid point.

    Trial t at grid index i is seeded from ``(master_seed, i, t)`` alone, so the
    curve is the same for any worker count.
    """
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be at least 1")
    config = config or Configuration()
    chunk = max(1, math.ceil(trials_per_point / (4 * config.jobs)))
    tasks = []
    for i, p in enumerate(p_grid):
        for start in range(0, trials_per_point, chunk):
            stop = min(trials_per_point, start + chunk)
            tasks.append((code, float(p), i, start, stop, master_seed, config))
    results = run_partitioned(_run_chunk, tasks, config.jobs)

    totals = [[0, 0, 0] for _ in p_grid]
    for task, (failures, exact, non_converged) in zip(tasks, results):
        row = totals[task[2]]
        row[0] += failures
        row[1] += exact
        row[2] += non_converged

    points = []
    for p, (failures, exact, non_converged) in zip(p_grid, totals):
        low, high = wilson_interval(failures, trials_per_point)
        if non_converged:
            logging.warning(f"p={p:g}: {non_converged}/{trials_per_point} trials did not converge")
        points.append(
            CurvePoint(
                p=float(p),
                trials=trials_per_point,
                failures=failures,
                rate=failures / trials_per_point,
                ci_low=low,
                ci_high=high,
                exact_recoveries=exact,
                exact_recovery_rate=exact / trials_per_point,
                non_converged=non_converged,
            )
        )
    return MonteCarloCurve(
        family=code.family.value,
        s=code.s,
        n=code.n,
        K=code.K,
        master_seed=master_seed,
        bp_max_iters=config.bp_max_iters,
        bp_clip=config.bp_clip,
        bp_damping=config.bp_damping,
        points=points,
    )


def curve_frame(curve: MonteCarloCurve) -> pd.DataFrame:
    """Tabulate curve points in CSV column order."""
    return pd.DataFrame([point.model_dump() for point in curve.points], columns=CSV_COLUMNS)


def write_curve_csv(curve: MonteCarloCurve, path: Union[str, Path]) -> Path:
    """Write the curve as CSV with CRLF line endings."""
    target = Path(path)
    curve_frame(curve).to_csv(target, index=False, lineterminator="\r\n")
    return target
