"""CSS quantum codes assembled from the classical PG(2,2^s) constructions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

from pg_qldpc.classical import (
    DistanceResult,
    EnumerationBudgetError,
    ParityCheckMatrix,
    build_construction,
    capped_codewords,
    enumerate_min_weight,
)
from pg_qldpc.claims import QuantumClaim, quantum_claim
from pg_qldpc.configuration import MAX_CODE_S, Construction, Family, family_constructions
from pg_qldpc.geometry import (
    HyperovalPartition,
    PlaneModel,
    UnsupportedFieldError,
    build_plane,
    regular_hyperoval,
)
from pg_qldpc.gf2 import (
    BitMatrix,
    RowReducer,
    ShapeMismatchError,
    SymplecticVector,
    is_self_orthogonal,
    mul_transpose,
    nullspace_basis,
    rank,
    twisted_inner_product,
)
from pg_qldpc.state import ClaimCheck, Verdict


class NotOrthogonalError(ValueError):
    """Raised when check matrices do not satisfy the CSS orthogonality condition."""


SYMMETRIC_FAMILY = {
    Construction.M_PI_PRIME: Family.PI,
    Construction.H_SK: Family.SYM_SK,
    Construction.H_SEA: Family.SYM_SE,
}


@dataclass(frozen=True)
class StabilizerCheckMatrix:
    """The binary ``[A|B]`` form of a stabilizer generating set."""

    A: BitMatrix
    B: BitMatrix

    def __post_init__(self):
        """Reject X and Z parts of different shapes."""
        if self.A.shape != self.B.shape:
            raise ShapeMismatchError(f"X part {self.A.shape} and Z part {self.B.shape} differ")

    @property
    def n(self) -> int:
        """Number of qubits."""
        return self.A.n_cols

    def generators(self) -> list[SymplecticVector]:
        """Return each row as an (a|b) operator."""
        return [SymplecticVector(self.A.row(i), self.B.row(i)) for i in range(self.A.n_rows)]


@dataclass(frozen=True)
class CssCode:
    """A CSS code with X checks ``H_X`` and Z checks ``H_Z``."""

    family: Family
    H_X: ParityCheckMatrix
    H_Z: ParityCheckMatrix
    n: int
    rank_x: int
    rank_z: int
    K: int
    stabilizer_count: int
    claim: QuantumClaim
    distance: Optional[DistanceResult] = None

    @property
    def s(self) -> int:
        """Field exponent of the underlying plane."""
        return self.H_X.s

    @property
    def symmetric(self) -> bool:
        """Whether X and Z checks are the same matrix."""
        return self.H_X.H == self.H_Z.H

    @property
    def K_claim_bounds(self) -> tuple[int, Optional[int]]:
        """Stated lower and upper bound on K."""
        return self.claim.K.lo, self.claim.K.hi

    @property
    def D_lower_claim(self) -> int:
        """Stated lower bound on D."""
        return self.claim.D.lo


def validate_stabilizer(A: BitMatrix, B: BitMatrix) -> bool:
    """Return whether ``A·B^t + B·A^t = 0`` over GF(2)."""
    if A.shape != B.shape:
        raise ShapeMismatchError(f"X part {A.shape} and Z part {B.shape} differ")
    return (mul_transpose(A, B) + mul_transpose(B, A)).is_zero()


def generators_commute(S: StabilizerCheckMatrix) -> bool:
    """Check every pair of generators for a zero twisted inner product."""
    gens = S.generators()
    for i, u in enumerate(gens):
        for v in gens[i + 1:]:
            if twisted_inner_product(u, v):
                return False
    return True


def stabilizer_matrix(code: CssCode) -> StabilizerCheckMatrix:
    """Return ``A = [H_X; 0]`` and ``B = [0; H_Z]``."""
    hx, hz = code.H_X.H, code.H_Z.H
    A = hx.vstack(BitMatrix.zeros(hz.n_rows, code.n))
    B = BitMatrix.zeros(hx.n_rows, code.n).vstack(hz)
    return StabilizerCheckMatrix(A, B)


def _assemble(family: Family, H_X: ParityCheckMatrix, H_Z: ParityCheckMatrix) -> CssCode:
    rank_x = rank(H_X.H)
    rank_z = rank_x if H_X.H == H_Z.H else rank(H_Z.H)
    n = H_X.n
    code = CssCode(
        family=family,
        H_X=H_X,
        H_Z=H_Z,
        n=n,
        rank_x=rank_x,
        rank_z=rank_z,
        K=n - rank_x - rank_z,
        stabilizer_count=H_X.H.n_rows + H_Z.H.n_rows,
        claim=quantum_claim(family, H_X.s),
    )
    logging.info(f"{family.value} s={H_X.s}: [[{n}, {code.K}]] with {code.stabilizer_count} stabilizers")
    return code


def build_symmetric_css(H: ParityCheckMatrix, family: Optional[Family] = None) -> CssCode:
    """Use a self-orthogonal H for both X and Z checks."""
    if not is_self_orthogonal(H.H):
        raise NotOrthogonalError(f"{H.construction.value} at s={H.s} is not self-orthogonal")
    if family is None:
        if H.construction not in SYMMETRIC_FAMILY:
            raise ValueError(f"no symmetric family is built from {H.construction.value}")
        family = SYMMETRIC_FAMILY[H.construction]
    return _assemble(family, H, H)


def build_asymmetric_css(H1: ParityCheckMatrix, H2: ParityCheckMatrix, family: Family = Family.ASYM) -> CssCode:
    """Use H1 as X checks and H2 as Z checks; requires ``H1·H2^t = 0``."""
    if H1.n != H2.n:
        raise ShapeMismatchError(f"codes of length {H1.n} and {H2.n} cannot be paired")
    if H1.H == H2.H:
        return build_symmetric_css(H1)
    if not mul_transpose(H1.H, H2.H).is_zero():
        raise NotOrthogonalError(f"{H1.construction.value} and {H2.construction.value} are not orthogonal")
    return _assemble(family, H1, H2)


def build_family(
    family: Family,
    s: int,
    plane: Optional[PlaneModel] = None,
    partition: Optional[HyperovalPartition] = None,
) -> CssCode:
    """Build one of the four families from a fresh (or supplied) plane."""
    if not 1 <= s <= MAX_CODE_S:
        raise UnsupportedFieldError(f"codes are built for 1 <= s <= {MAX_CODE_S}, got s={s}")
    plane = plane or build_plane(s)
    partition = partition or regular_hyperoval(plane)
    parts = [build_construction(c, plane, partition) for c in family_constructions(family)]
    if family is Family.ASYM:
        return build_asymmetric_css(parts[0], parts[1])
    return build_symmetric_css(parts[0], family)


##########################
# Quantum distance
##########################

def _sector_distance(H: BitMatrix, other: BitMatrix, cap: Optional[int], budget_bits: int, jobs: int) -> DistanceResult:
    """Return the minimum weight of ``ker(H)`` outside ``rowspace(other)``."""
    basis = list(nullspace_basis(H).rows)
    reducer = RowReducer(other)
    if len(basis) <= budget_bits:
        best, word = enumerate_min_weight(basis, exclude=reducer, jobs=jobs)
        upper = None if best == math.inf else int(best)
        return DistanceResult(exact=best, lower_bound=best, upper_bound=upper, codeword=word, method="enumeration")
    if cap is None:
        raise EnumerationBudgetError(f"kernel dimension {len(basis)} exceeds {budget_bits} bits; give a weight cap")
    for word in capped_codewords(H, cap):
        if not reducer.contains(word):
            w = word.bit_count()
            return DistanceResult(exact=w, lower_bound=w, upper_bound=w, codeword=word, method=f"capped<={cap}")
    return DistanceResult(exact=None, lower_bound=cap + 1, upper_bound=None, codeword=None, method=f"capped<={cap}")


def _combine(results: list[DistanceResult]) -> DistanceResult:
    exact = [r for r in results if r.exact is not None]
    capped = [r for r in results if r.exact is None]
    best_exact = min(exact, key=lambda r: r.exact) if exact else None
    floor = min((r.lower_bound for r in capped), default=math.inf)
    method = "+".join(sorted({r.method for r in results}))
    if best_exact is not None and best_exact.exact <= floor:
        return replace(best_exact, method=method)
    upper = best_exact.upper_bound if best_exact is not None else None
    return DistanceResult(exact=None, lower_bound=floor, upper_bound=upper, codeword=None, method=method)


def quantum_distance_exact(code: CssCode, cap: Optional[int] = None, budget_bits: int = 26, jobs: int = 1) -> DistanceResult:
    """Return the coset distance of the code, or a certified lower bound.

    Both sectors are searched: ``ker(H_X) \\ rowspace(H_Z)`` and
    ``ker(H_Z) \\ rowspace(H_X)``. A code with K = 0 has infinite distance.
    """
    if code.K == 0:
        return DistanceResult(exact=math.inf, lower_bound=math.inf, upper_bound=None, codeword=None, method="trivial")
    hx, hz = code.H_X.H, code.H_Z.H
    sectors = [_sector_distance(hx, hz, cap, budget_bits, jobs)]
    if not code.symmetric:
        sectors.append(_sector_distance(hz, hx, cap, budget_bits, jobs))
    result = _combine(sectors)
    if result.exact is None:
        logging.warning(f"{code.family.value} s={code.s}: distance only bounded below by {result.lower_bound}")
    return result


def with_distance(code: CssCode, distance: DistanceResult) -> CssCode:
    """Return a copy of code carrying a distance result."""
    return replace(code, distance=distance)


##########################
# Claim report
##########################

def _verdict(ok: bool, soft: bool = False) -> Verdict:
    if ok:
        return Verdict.PASS
    return Verdict.FLAG if soft else Verdict.FAIL


def _distance_check(name: str, code: CssCode) -> ClaimCheck:
    claim = code.claim.D
    result = code.distance
    if result.exact == math.inf:
        return ClaimCheck(name=name, claim=str(claim), computed="inf", verdict=Verdict.FLAG, note="K = 0: no logical operators")
    if result.exact is not None:
        d = int(result.exact)
        if code.claim.d_equality:
            verdict = Verdict.PASS if d == claim.lo else (Verdict.FLAG if d > claim.lo else Verdict.FAIL)
            note = "distance exceeds the stated value" if d > claim.lo else ""
            return ClaimCheck(name=name, claim=str(claim), computed=str(d), verdict=verdict, note=note)
        return ClaimCheck(name=name, claim=f">= {claim.lo}", computed=str(d), verdict=_verdict(d >= claim.lo))

    lower = int(result.lower_bound)
    computed = f">= {lower}" if result.upper_bound is None else f"[{lower}, {result.upper_bound}]"
    if result.upper_bound is not None and result.upper_bound < claim.lo:
        return ClaimCheck(name=name, claim=str(claim), computed=computed, verdict=Verdict.FAIL)
    if code.claim.d_equality:
        if lower > claim.lo:
            return ClaimCheck(name=name, claim=str(claim), computed=computed, verdict=Verdict.FLAG, note="distance exceeds the stated value")
    elif lower >= claim.lo:
        return ClaimCheck(name=name, claim=f">= {claim.lo}", computed=computed, verdict=Verdict.PASS)
    return ClaimCheck(
        name=name,
        claim=str(claim),
        computed=computed,
        verdict=Verdict.UNVERIFIED,
        note="consistent with the computed bounds but not certified",
    )


def claim_report(code: CssCode) -> list[ClaimCheck]:
    """Compare n, K, D and the stabilizer count against the stated values."""
    prefix = f"{code.family.value}.s{code.s}"
    claim = code.claim
    checks = [
        ClaimCheck(name=f"{prefix}.n", claim=str(claim.n), computed=str(code.n), verdict=_verdict(code.n == claim.n)),
        ClaimCheck(
            name=f"{prefix}.stabilizer_count",
            claim=str(claim.stabilizer_count),
            computed=str(code.stabilizer_count),
            verdict=_verdict(code.stabilizer_count == claim.stabilizer_count),
        ),
    ]

    # The asymmetric interval inherits the stated H_SE dimension.
    soft = code.family is Family.ASYM
    note = ""
    if claim.K.is_empty:
        note = "stated interval is empty"
    elif code.K not in claim.K:
        note = "outside the stated interval"
    checks.append(
        ClaimCheck(
            name=f"{prefix}.K",
            claim=str(claim.K),
            computed=str(code.K),
            verdict=_verdict(code.K in claim.K and not claim.K.is_empty, soft=soft),
            note=note,
        )
    )
    if code.distance is not None:
        checks.append(_distance_check(f"{prefix}.D", code))
    return checks
