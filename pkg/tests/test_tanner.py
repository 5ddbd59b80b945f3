import math

import pytest

from pg_qldpc.classical import build_H_se, build_M_pi, build_M_pi_prime
from pg_qldpc.gf2 import BitMatrix, block_diagonal
from pg_qldpc.tanner import analyze, count_four_cycles_direct, four_cycles_from_spectrum, girth, overlap_spectrum


def test_identity_has_no_cycles():
    stats = analyze(BitMatrix.identity(4))
    assert stats.four_cycle_count == 0
    assert math.isinf(stats.girth)
    assert stats.overlap_spectrum == {0: 6}
    assert stats.as_dict()["girth"] is None


def test_single_row_is_acyclic():
    assert math.isinf(girth(BitMatrix.from_dense([[1, 1, 1, 1]])))


def test_two_rows_sharing_two_columns():
    H = BitMatrix.from_dense([[1, 1, 0], [1, 1, 1]])
    assert overlap_spectrum(H) == {2: 1}
    assert four_cycles_from_spectrum(overlap_spectrum(H)) == 1
    assert count_four_cycles_direct(H) == 1
    assert girth(H) == 4


def test_six_cycle():
    H = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert girth(H) == 6
    assert analyze(H).four_cycle_count == 0


def test_incidence_matrix_has_girth_six(field_s, geometry_of):
    plane, _ = geometry_of(field_s)
    stats = analyze(build_M_pi(plane).H)
    assert stats.max_overlap == 1
    assert stats.four_cycle_count == 0
    assert stats.girth == 6
    q = plane.q
    assert stats.row_degree_histogram == {q + 1: q * q + q + 1}
    assert stats.col_degree_histogram == {q + 1: q * q + q + 1}


def test_unit_column_creates_four_cycles(geometry_of):
    plane, _ = geometry_of(2)
    H = build_M_pi_prime(plane).H
    stats = analyze(H)
    assert stats.four_cycle_count == math.comb(21, 2) == 210
    assert count_four_cycles_direct(H) == 210
    assert stats.girth == 4
    assert stats.col_degree_histogram == {5: 21, 21: 1}


def test_h_se_overlap_spectrum(geometry_of):
    plane, partition = geometry_of(2)
    spectrum = overlap_spectrum(build_H_se(plane, partition).H)
    assert 1 in spectrum and 2 in spectrum
    assert sum(spectrum.values()) == math.comb(15, 2)


def test_stabilizer_block_counts_add(geometry_of):
    plane, _ = geometry_of(1)
    H = build_M_pi_prime(plane).H
    block = analyze(block_diagonal(H, H))
    assert block.four_cycle_count == 2 * analyze(H).four_cycle_count
    assert block.shape == (14, 16)


def test_density_decreases_with_s(geometry_of):
    densities = [analyze(build_M_pi(geometry_of(s)[0]).H).density for s in (1, 2, 3)]
    assert densities == sorted(densities, reverse=True)
    assert densities[0] == pytest.approx(3 / 7)
