"""Report models and graph state for code verification."""

import operator
from enum import Enum
from typing import Annotated, Any, Optional

from pydantic import BaseModel, Field
from typing_extensions import TypedDict


###################
# Structured Outputs
###################
class Verdict(str, Enum):
    """Outcome of comparing a stated parameter with a computed one."""

    PASS = "PASS"
    FAIL = "FAIL"
    FLAG = "FLAG"
    UNVERIFIED = "UNVERIFIED"


class ClaimCheck(BaseModel):
    """One stated-versus-computed comparison."""

    name: str = Field(description="Dotted identifier, e.g. 'pi.s2.K'.")
    claim: str = Field(description="The stated value or interval.")
    computed: str = Field(description="The measured value or bound.")
    verdict: Verdict
    note: str = ""


class DistanceSummary(BaseModel):
    """Distance with provenance: the stated bounds and what was computed."""

    claim_lower: int
    claim_upper: Optional[int] = None
    computed_lower: Optional[int] = Field(
        default=None,
        description="Certified lower bound from a capped search.",
    )
    exact: Optional[int] = Field(
        default=None,
        description="Exact value, when the search was exhaustive or hit a codeword within the cap.",
    )
    unbounded: bool = Field(
        default=False,
        description="True when there are no logical operators (K = 0), so the distance is infinite.",
    )
    method: str = "none"


class ClassicalSummary(BaseModel):
    """Computed and stated parameters of one classical construction."""

    construction: str
    s: int
    n: int
    shape: tuple[int, int]
    rank: int
    k: int
    distance: DistanceSummary
    witness_weight: Optional[int] = None


class CodeReport(BaseModel):
    """JSON document written next to exported matrices."""

    subject: str = Field(description="Quantum family or classical construction tag.")
    s: int
    q: int
    n: int
    field_polynomial: str
    version: str
    classical: list[ClassicalSummary] = Field(default_factory=list)
    K: Optional[int] = None
    stabilizer_count: Optional[int] = None
    distance: Optional[DistanceSummary] = None
    tanner: dict[str, Any] = Field(default_factory=dict)
    checks: list[ClaimCheck] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)


class CurvePoint(BaseModel):
    """Monte Carlo result at one depolarizing probability."""

    p: float
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float
    exact_recoveries: int
    exact_recovery_rate: float
    non_converged: int


class MonteCarloCurve(BaseModel):
    """A full logical-error-rate curve for one code."""

    family: str
    s: int
    n: int
    K: int
    master_seed: int
    bp_max_iters: int
    bp_clip: float
    bp_damping: float
    points: list[CurvePoint]


###################
# State Definitions
###################

def override_reducer(current_value, new_value):
    """Concatenate node outputs, or replace the value when given an override marker."""
    if isinstance(new_value, dict) and new_value.get("type") == "override":
        return new_value.get("value", new_value)
    else:
        return operator.add(current_value, new_value)


class VerificationInputState(TypedDict):
    """What a caller supplies: the field exponent and which families to sweep."""

    s: int
    families: list[str]


class VerificationState(TypedDict):
    """State shared by the verification graph nodes."""

    s: int
    families: list[str]
    plane: Any
    partition: Any
    matrices: dict[str, Any]
    records: dict[str, Any]
    checks: Annotated[list[ClaimCheck], override_reducer]
    tanner: Annotated[dict[str, Any], operator.or_]
