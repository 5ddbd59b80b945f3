from dataclasses import replace

import pytest

from pg_qldpc import classical
from pg_qldpc.claims import Interval
from pg_qldpc.configuration import Construction, Family
from pg_qldpc.geometry import UnsupportedFieldError
from pg_qldpc.state import Verdict
from pg_qldpc.verifier import run_verification, verification_graph


def _by_name(result):
    return {c.name: c for c in result.checks}


def test_graph_nodes():
    nodes = set(verification_graph.get_graph().nodes)
    assert {"prepare_geometry", "verify_classical", "verify_quantum", "measure_tanner"} <= nodes


def test_fano_sweep_passes_with_flags():
    result = run_verification(1)
    checks = _by_name(result)
    assert result.exit_code == 0
    assert result.count(Verdict.FAIL) == 0
    assert checks["h-se.s1.k"].verdict is Verdict.FLAG
    assert checks["pi.s1.D"].verdict is Verdict.FLAG
    assert checks["sym-sk.s1.D"].verdict is Verdict.PASS
    assert checks["plane.s1.axioms"].verdict is Verdict.PASS
    assert checks["h-se.s1.symmetric_rejected"].verdict is Verdict.PASS
    assert checks["sym-se.s1.matches_pi"].verdict is Verdict.PASS
    assert checks["m-pi.s1.girth"].verdict is Verdict.PASS
    assert "pi.stabilizer" in result.tanner


def test_s2_sweep_passes():
    result = run_verification(2)
    checks = _by_name(result)
    assert result.exit_code == 0
    assert checks["pi.s2.D"].verdict is Verdict.PASS
    assert checks["m-pi-prime.s2.four_cycles"].computed == "210"
    assert checks["m-pi.s2.rank"].verdict is Verdict.PASS
    assert checks["m-pi.s2.rank_stability"].verdict is Verdict.PASS


def test_single_family_selection():
    result = run_verification(1, [Family.PI])
    names = {c.name for c in result.checks}
    assert "pi.s1.K" in names
    assert not any(name.startswith("asym.") for name in names)
    assert "h-sk" not in result.tanner


def test_configuration_flows_into_nodes():
    result = run_verification(2, [Family.PI], {"configurable": {"enumeration_budget_bits": 4, "distance_cap": 6}})
    checks = _by_name(result)
    assert checks["pi.s2.D"].verdict is Verdict.PASS
    assert checks["m-pi-prime.s2.d"].verdict is Verdict.PASS


def test_unsupported_field_is_rejected():
    with pytest.raises(UnsupportedFieldError):
        run_verification(5)


@pytest.fixture
def wrong_incidence_rank(monkeypatch):
    stated = classical.classical_claim

    def claim(construction, s):
        result = stated(construction, s)
        if construction is Construction.M_PI:
            return replace(result, rank=Interval.exact(result.rank.lo + 1))
        return result

    monkeypatch.setattr(classical, "classical_claim", claim)


def test_failed_check_sets_exit_code(wrong_incidence_rank):
    result = run_verification(1, [Family.PI])
    checks = _by_name(result)
    assert checks["m-pi.s1.rank"].verdict is Verdict.FAIL
    assert result.count(Verdict.FAIL) >= 1
    assert result.exit_code == 1


@pytest.mark.slow
def test_s3_sweep():
    result = run_verification(3)
    checks = _by_name(result)
    assert result.exit_code == 0
    assert checks["pi.s3.K"].computed == "18"
    assert checks["pi.s3.D"].verdict is Verdict.UNVERIFIED
    assert checks["m-pi.s3.d"].verdict is Verdict.UNVERIFIED
    assert checks["m-pi.s3.rank"].verdict is Verdict.PASS
    assert checks["m-pi.s3.girth"].verdict is Verdict.PASS
    for family in Family:
        assert checks[f"{family.value}.s3.stabilizer_condition"].verdict is Verdict.PASS
        assert checks[f"{family.value}.s3.pairwise_commute"].verdict is Verdict.PASS
    assert not any(name.endswith("four_cycles_two_ways") for name in checks)
