import math

import numpy as np
import pytest

from pg_qldpc.classical import build_M_pi
from pg_qldpc.configuration import Configuration, Family
from pg_qldpc.css import build_family
from pg_qldpc.decoder import (
    CSV_COLUMNS,
    ChannelModel,
    CssDecoder,
    PauliErrorVector,
    bp_decode,
    decode_error,
    decode_trial,
    run_monte_carlo,
    sample_error,
    syndrome,
    trial_rng,
    wilson_interval,
    write_curve_csv,
)
from pg_qldpc.gf2 import BitVector


@pytest.fixture
def pi_code(geometry_of):
    plane, partition = geometry_of(2)
    return build_family(Family.PI, 2, plane, partition)


##########################
# Channel
##########################

def test_channel_rejects_bad_probability():
    with pytest.raises(ValueError):
        ChannelModel(1.5)
    with pytest.raises(ValueError):
        ChannelModel(-0.1)


def test_sample_extremes():
    rng = np.random.default_rng(7)
    assert sample_error(ChannelModel(0.0), 50, rng) == PauliErrorVector.identity(50)
    error = sample_error(ChannelModel(1.0), 50, rng)
    assert ((error.e_x.to_array() | error.e_z.to_array()) == 1).all()


def test_sample_marginal_within_three_sigma():
    n, p = 100_000, 0.1
    error = sample_error(ChannelModel(p), n, trial_rng(1, 0, 0))
    expected = 2 * p / 3
    sigma = math.sqrt(expected * (1 - expected) / n)
    assert abs(error.e_x.weight / n - expected) < 3 * sigma
    assert abs(error.e_z.weight / n - expected) < 3 * sigma


def test_sample_is_seeded():
    a = sample_error(ChannelModel(0.2), 40, trial_rng(5, 1, 2))
    b = sample_error(ChannelModel(0.2), 40, trial_rng(5, 1, 2))
    assert a == b


def test_single_pauli_components():
    y = PauliErrorVector.single(4, 2, "Y")
    assert y.e_x.support() == [2] and y.e_z.support() == [2]
    assert (PauliErrorVector.single(4, 2, "X") ^ PauliErrorVector.single(4, 2, "Z")) == y
    with pytest.raises(ValueError):
        PauliErrorVector.single(4, 0, "W")


##########################
# Syndromes
##########################

def test_zero_error_has_zero_syndrome(pi_code):
    s_x, s_z = syndrome(pi_code, PauliErrorVector.identity(pi_code.n))
    assert s_x.weight == s_z.weight == 0


def test_single_x_error_reads_a_column(pi_code):
    s_x, s_z = syndrome(pi_code, PauliErrorVector.single(pi_code.n, 3, "X"))
    assert s_x.weight == 0
    assert s_z == pi_code.H_Z.H.column(3)


def test_stabilizers_are_undetectable(pi_code):
    row = pi_code.H_Z.H.row(4)
    s_x, s_z = syndrome(pi_code, PauliErrorVector(row, BitVector(pi_code.n)))
    assert s_x.weight == s_z.weight == 0


def test_syndrome_is_linear(pi_code):
    rng = trial_rng(3, 0, 0)
    a = sample_error(ChannelModel(0.3), pi_code.n, rng)
    b = sample_error(ChannelModel(0.3), pi_code.n, rng)
    sa, sb, sab = syndrome(pi_code, a), syndrome(pi_code, b), syndrome(pi_code, a ^ b)
    assert sab == (sa[0] ^ sb[0], sa[1] ^ sb[1])


##########################
# Sum-product
##########################

def test_zero_syndrome_decodes_immediately(geometry_of):
    H = build_M_pi(geometry_of(2)[0]).H
    result = bp_decode(H, BitVector(H.n_rows), 0.01)
    assert result.converged
    assert result.iterations == 0
    assert result.estimate.weight == 0


def test_single_bit_errors_on_incidence_code(geometry_of):
    H = build_M_pi(geometry_of(2)[0]).H
    for j in range(H.n_cols):
        error = BitVector.from_support(H.n_cols, [j])
        result = bp_decode(H, H.multiply_vector(error), 0.01)
        assert result.converged
        assert result.estimate == error


def test_two_bit_errors_on_incidence_code(geometry_of):
    H = build_M_pi(geometry_of(2)[0]).H
    for a, b in [(0, 1), (2, 17), (5, 20)]:
        error = BitVector.from_support(H.n_cols, [a, b])
        result = bp_decode(H, H.multiply_vector(error), 0.01)
        assert result.converged
        assert result.estimate == error


def test_every_single_qubit_error_is_corrected(pi_code):
    decoder = CssDecoder(pi_code)
    failures = []
    for qubit in range(pi_code.n):
        for pauli in ("X", "Y", "Z"):
            outcome = decoder.decode_error(PauliErrorVector.single(pi_code.n, qubit, pauli), 0.01)
            if not (outcome.converged and outcome.exact_recovery) or outcome.logical_failure:
                failures.append((qubit, pauli))
    assert failures == []


def test_unit_qubit_error_needs_damping(pi_code):
    unit = pi_code.n - 1
    error = PauliErrorVector.single(pi_code.n, unit, "X")
    damped = decode_error(pi_code, error, 0.01)
    assert damped.converged and damped.exact_recovery
    assert damped.iterations_used == 2
    flooding = decode_error(pi_code, error, 0.01, Configuration(bp_damping=0.0, bp_max_iters=50))
    assert not flooding.converged
    assert flooding.logical_failure


def test_stabilizer_error_is_not_a_failure(pi_code):
    error = PauliErrorVector(pi_code.H_Z.H.row(0), BitVector(pi_code.n))
    outcome = decode_error(pi_code, error, 0.01)
    assert outcome.converged
    assert not outcome.logical_failure
    assert not outcome.exact_recovery


def test_zero_probability_never_fails(pi_code):
    outcome = decode_trial(pi_code, ChannelModel(0.0), (42, 0, 0))
    assert outcome.converged and not outcome.logical_failure and outcome.exact_recovery


def test_decode_trial_is_deterministic(pi_code):
    first = decode_trial(pi_code, ChannelModel(0.05), (42, 0, 7))
    second = decode_trial(pi_code, ChannelModel(0.05), (42, 0, 7))
    assert first == second


def test_decode_trial_draws_from_trial_stream(pi_code):
    channel = ChannelModel(0.1)
    error = sample_error(channel, pi_code.n, trial_rng(4, 1, 2))
    assert decode_trial(pi_code, channel, (4, 1, 2)) == decode_error(pi_code, error, 0.1)


def test_k0_code_fails_only_by_non_convergence(geometry_of):
    plane, partition = geometry_of(1)
    code = build_family(Family.PI, 1, plane, partition)
    decoder = CssDecoder(code)
    for t in range(50):
        outcome = decode_trial(code, ChannelModel(0.2), (9, 0, t), decoder=decoder)
        assert outcome.logical_failure == (not outcome.converged)


##########################
# Monte Carlo
##########################

def test_wilson_interval():
    low, high = wilson_interval(0, 100)
    assert low == pytest.approx(0.0, abs=1e-12)
    assert high == pytest.approx(0.037, abs=1e-3)
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high
    assert 0.5 - low == pytest.approx(high - 0.5)
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


def test_monte_carlo_extremes(pi_code):
    curve = run_monte_carlo(pi_code, [0.0, 1.0], 40, master_seed=3)
    zero, full = curve.points
    assert zero.failures == 0 and zero.rate == 0.0
    assert zero.exact_recoveries == 40
    assert full.rate > 0.5
    assert (curve.n, curve.K) == (22, 2)


def test_monte_carlo_rejects_zero_trials(pi_code):
    with pytest.raises(ValueError):
        run_monte_carlo(pi_code, [0.01], 0, master_seed=0)


def test_monte_carlo_is_reproducible(pi_code):
    grid = [0.01, 0.05]
    first = run_monte_carlo(pi_code, grid, 30, master_seed=11)
    second = run_monte_carlo(pi_code, grid, 30, master_seed=11)
    assert first == second


def test_monte_carlo_independent_of_jobs(pi_code):
    grid = [0.02, 0.08]
    serial = run_monte_carlo(pi_code, grid, 16, master_seed=5, config=Configuration(jobs=1))
    parallel = run_monte_carlo(pi_code, grid, 16, master_seed=5, config=Configuration(jobs=2))
    assert serial.points == parallel.points


def test_curve_csv(pi_code, tmp_path):
    curve = run_monte_carlo(pi_code, [0.0, 0.05], 10, master_seed=1)
    path = write_curve_csv(curve, tmp_path / "curve.csv")
    raw = path.read_bytes()
    assert raw.startswith(",".join(CSV_COLUMNS).encode() + b"\r\n")
    assert raw.count(b"\r\n") == 3


@pytest.mark.slow
def test_low_noise_rate_is_small(pi_code):
    curve = run_monte_carlo(pi_code, [0.001], 10_000, master_seed=0)
    assert curve.points[0].rate < 0.05


@pytest.mark.slow
def test_rate_at_one_percent(pi_code):
    point = run_monte_carlo(pi_code, [0.01], 10_000, master_seed=0).points[0]
    assert point.trials == 10_000
    assert point.rate < 1.0
    assert point.rate < 0.1
    assert point.exact_recovery_rate <= 1.0 - point.rate
    assert point.ci_low <= point.rate <= point.ci_high
