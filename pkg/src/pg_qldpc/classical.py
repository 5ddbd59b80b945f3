"""Classical parity-check constructions from PG(2,2^s) and their distance oracle."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from pg_qldpc.claims import ClassicalClaim, Interval, classical_claim, witness_weight
from pg_qldpc.configuration import Construction
from pg_qldpc.geometry import HyperovalPartition, PlaneModel
from pg_qldpc.gf2 import (
    BitMatrix,
    BitVector,
    RowReducer,
    is_self_orthogonal,
    nullspace_basis,
    rank,
)
from pg_qldpc.state import ClaimCheck, ClassicalSummary, DistanceSummary, Verdict
from pg_qldpc.utils import run_partitioned

UNIT_LABEL = "U"

ColumnLabel = Union[int, str]


class EnumerationBudgetError(RuntimeError):
    """Raised when exhaustive enumeration is too large and no weight cap was given."""


@dataclass(frozen=True)
class ParityCheckMatrix:
    """A parity-check matrix labelled by lines (rows) and points (columns)."""

    H: BitMatrix
    col_labels: tuple[ColumnLabel, ...]
    row_labels: tuple[int, ...]
    construction: Construction
    s: int

    @property
    def n(self) -> int:
        """Code length."""
        return self.H.n_cols

    @property
    def shape(self) -> tuple[int, int]:
        """Return (rows, columns) of H."""
        return self.H.shape

    @property
    def has_unit_column(self) -> bool:
        """Whether the last column is the appended all-ones column."""
        return bool(self.col_labels) and self.col_labels[-1] == UNIT_LABEL

    def without_unit_column(self) -> BitMatrix:
        """Return H with the trailing all-ones column removed."""
        if not self.has_unit_column:
            return self.H
        return self.H.select_columns(range(self.n - 1))


##########################
# Builders
##########################

def _restricted(plane: PlaneModel, lines: Sequence[int], points: Sequence[int], construction: Construction) -> ParityCheckMatrix:
    """Build the incidence of ``lines`` against ``points`` with the unit column appended."""
    column_of = {p: j for j, p in enumerate(points)}
    unit = len(points)
    supports = [
        [column_of[p] for p in plane.line_points[li] if p in column_of] + [unit]
        for li in lines
    ]
    return ParityCheckMatrix(
        H=BitMatrix.from_supports(unit + 1, supports),
        col_labels=tuple(points) + (UNIT_LABEL,),
        row_labels=tuple(lines),
        construction=construction,
        s=plane.s,
    )


def build_M_pi(plane: PlaneModel) -> ParityCheckMatrix:
    """Return the line-point incidence matrix of the plane."""
    n = len(plane.points)
    return ParityCheckMatrix(
        H=BitMatrix.from_supports(n, plane.line_points),
        col_labels=tuple(range(n)),
        row_labels=tuple(range(n)),
        construction=Construction.M_PI,
        s=plane.s,
    )


def build_M_pi_prime(plane: PlaneModel) -> ParityCheckMatrix:
    """Return the incidence matrix with an all-ones column appended."""
    n = len(plane.points)
    return _restricted(plane, range(n), range(n), Construction.M_PI_PRIME)


def build_H_sk(plane: PlaneModel, partition: HyperovalPartition) -> ParityCheckMatrix:
    """Build skew lines against non-hyperoval points, then the unit column."""
    return _restricted(plane, partition.skew_lines, partition.non_hyperoval_points(plane), Construction.H_SK)


def build_H_seA(plane: PlaneModel, partition: HyperovalPartition) -> ParityCheckMatrix:
    """Build secant lines against all points, then the unit column."""
    return _restricted(plane, partition.secant_lines, range(len(plane.points)), Construction.H_SEA)


def build_H_se(plane: PlaneModel, partition: HyperovalPartition) -> ParityCheckMatrix:
    """Build secant lines against non-hyperoval points, then the unit column."""
    return _restricted(plane, partition.secant_lines, partition.non_hyperoval_points(plane), Construction.H_SE)


def build_construction(construction: Construction, plane: PlaneModel, partition: HyperovalPartition) -> ParityCheckMatrix:
    """Dispatch on the construction tag."""
    if construction is Construction.M_PI:
        return build_M_pi(plane)
    if construction is Construction.M_PI_PRIME:
        return build_M_pi_prime(plane)
    if construction is Construction.H_SK:
        return build_H_sk(plane, partition)
    if construction is Construction.H_SEA:
        return build_H_seA(plane, partition)
    return build_H_se(plane, partition)


def distance_witness(construction: Construction, plane: PlaneModel, partition: HyperovalPartition) -> BitVector:
    """Return the explicit low-weight codeword built from a single line.

    The vector is expressed in the column order of the matching builder.
    """
    n_points = len(plane.points)
    if construction is Construction.M_PI:
        # Every line meets a hyperoval evenly.
        return BitVector.from_support(n_points, partition.hyperoval)
    if construction in (Construction.M_PI_PRIME, Construction.H_SEA):
        return BitVector.from_support(n_points + 1, list(plane.line_points[0]) + [n_points])

    columns = partition.non_hyperoval_points(plane)
    column_of = {p: j for j, p in enumerate(columns)}
    unit = len(columns)
    if construction is Construction.H_SK:
        line = partition.secant_lines[0]
    else:
        line = partition.skew_lines[0]
    support = [column_of[p] for p in plane.line_points[line] if p in column_of] + [unit]
    return BitVector.from_support(unit + 1, support)


##########################
# Distance oracle
##########################

@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a minimum-distance search.

    ``exact`` is ``math.inf`` when the code has no nonzero codeword in scope,
    and ``None`` when the search was capped and found nothing within the cap.
    """

    exact: Optional[float]
    lower_bound: float
    upper_bound: Optional[int]
    codeword: Optional[int]
    method: str

    @property
    def is_exact(self) -> bool:
        """Whether the search determined the distance."""
        return self.exact is not None


def gray_code_scan(basis: Sequence[int], fixed: int, low_bits: int, exclude: Optional[tuple[list[int], list[int]]]) -> tuple[float, Optional[int]]:
    """Return the minimum weight over ``fixed + span(basis[:low_bits])``.

    Words reducing to zero modulo ``exclude`` (an echelon basis and its
    pivots) are skipped, as is the zero word.
    """
    best: float = math.inf
    best_word: Optional[int] = None
    word = fixed
    for i in range(1 << low_bits):
        if i:
            word ^= basis[(i & -i).bit_length() - 1]
        if not word:
            continue
        w = word.bit_count()
        if w > best or (w == best and best_word is not None and word > best_word):
            continue
        if exclude is not None and _reduce(exclude, word) == 0:
            continue
        best, best_word = w, word
    return best, best_word


def _reduce(exclude: tuple[list[int], list[int]], bits: int) -> int:
    rows, pivots = exclude
    for row, p in zip(rows, pivots):
        if (bits >> p) & 1:
            bits ^= row
    return bits


def _split_bits(k: int, jobs: int) -> int:
    if jobs <= 1:
        return 0
    return min(k, (4 * jobs - 1).bit_length())


def enumerate_min_weight(basis: Sequence[int], exclude: Optional[RowReducer] = None, jobs: int = 1) -> tuple[float, Optional[int]]:
    """Enumerate the span of ``basis`` (minus ``exclude``) for its minimum weight.

    The top basis vectors are fixed per partition so that partitions can run
    in separate processes; the minimum does not depend on how many there are.
    """
    k = len(basis)
    split = _split_bits(k, jobs)
    low = k - split
    excl = (exclude.basis, exclude.pivots) if exclude is not None else None
    jobs_args = []
    for j in range(1 << split):
        fixed = 0
        for b in range(split):
            if (j >> b) & 1:
                fixed ^= basis[low + b]
        jobs_args.append((list(basis), fixed, low, excl))
    results = run_partitioned(gray_code_scan, jobs_args, jobs)
    best: float = math.inf
    best_word: Optional[int] = None
    for w, word in results:
        if w < best or (w == best and word is not None and best_word is not None and word < best_word):
            best, best_word = w, word
    return best, best_word


def capped_codewords(H: BitMatrix, cap: int) -> list[int]:
    """Return every nonzero codeword of ``ker(H)`` with weight at most ``cap``.

    Subsets of at most ``ceil(cap/2)`` columns are bucketed by syndrome; a
    codeword of weight w <= cap splits into two disjoint halves of size at most
    ``ceil(cap/2)`` with equal syndrome, so it is the sum of a colliding pair.
    """
    half = (cap + 1) // 2
    columns = H.transpose().rows
    buckets: dict[int, list[int]] = {}
    for size in range(half + 1):
        for subset in itertools.combinations(range(H.n_cols), size):
            syn = 0
            mask = 0
            for j in subset:
                syn ^= columns[j]
                mask |= 1 << j
            buckets.setdefault(syn, []).append(mask)

    found: set[int] = set()
    for members in buckets.values():
        if len(members) < 2:
            continue
        for a, b in itertools.combinations(members, 2):
            word = a ^ b
            if word and word.bit_count() <= cap:
                found.add(word)
    return sorted(found, key=lambda w: (w.bit_count(), w))


def min_distance_oracle(
    H: Union[ParityCheckMatrix, BitMatrix],
    cap: Optional[int] = None,
    budget_bits: int = 26,
    jobs: int = 1,
) -> DistanceResult:
    """Return the minimum distance of ``ker(H)``, or a lower bound.

    The full code is enumerated when its dimension is within ``budget_bits``;
    otherwise a search for codewords of weight at most ``cap`` decides whether
    the distance is at most ``cap`` (and then returns it exactly).
    """
    matrix = H.H if isinstance(H, ParityCheckMatrix) else H
    basis = list(nullspace_basis(matrix).rows)
    k = len(basis)
    if k == 0:
        return DistanceResult(exact=math.inf, lower_bound=math.inf, upper_bound=None, codeword=None, method="trivial")
    if k <= budget_bits:
        best, word = enumerate_min_weight(basis, jobs=jobs)
        logging.debug(f"enumerated 2^{k} codewords, minimum weight {best}")
        return DistanceResult(exact=best, lower_bound=best, upper_bound=int(best), codeword=word, method="enumeration")
    if cap is None:
        raise EnumerationBudgetError(f"code dimension {k} exceeds the enumeration budget of {budget_bits} bits; give a weight cap")
    words = capped_codewords(matrix, cap)
    if words:
        best = words[0].bit_count()
        return DistanceResult(exact=best, lower_bound=best, upper_bound=best, codeword=words[0], method=f"capped<={cap}")
    logging.warning(f"no codeword of weight <= {cap} (dimension {k}); reporting a lower bound only")
    return DistanceResult(exact=None, lower_bound=cap + 1, upper_bound=None, codeword=None, method=f"capped<={cap}")


##########################
# Records and claim checks
##########################

@dataclass(frozen=True)
class ClassicalCodeRecord:
    """Computed parameters of a construction next to its stated ones."""

    construction: Construction
    s: int
    n: int
    n_rows: int
    rank: int
    k: int
    claim: ClassicalClaim
    row_weights: tuple[int, ...]
    self_orthogonal: bool
    distance: Optional[DistanceResult] = None
    witness: Optional[BitVector] = None
    witness_syndrome_zero: Optional[bool] = None

    @property
    def d_lower(self) -> int:
        """Stated lower distance bound."""
        return self.claim.d.lo

    @property
    def d_upper(self) -> Optional[int]:
        """Stated upper distance bound, if any."""
        return self.claim.d.hi

    @property
    def d_exact(self) -> Optional[float]:
        """Computed distance, when the search was exact."""
        return self.distance.exact if self.distance is not None else None

    def to_summary(self) -> ClassicalSummary:
        """Return the JSON summary of this record."""
        return ClassicalSummary(
            construction=self.construction.value,
            s=self.s,
            n=self.n,
            shape=(self.n_rows, self.n),
            rank=self.rank,
            k=self.k,
            distance=distance_summary(self.claim.d, self.distance),
            witness_weight=self.witness.weight if self.witness is not None else None,
        )


def distance_summary(claim: Interval, result: Optional[DistanceResult]) -> DistanceSummary:
    """Translate a search result into its JSON form."""
    summary = DistanceSummary(claim_lower=claim.lo, claim_upper=claim.hi)
    if result is None:
        return summary
    if result.exact == math.inf:
        return summary.model_copy(update={"unbounded": True, "method": result.method})
    return summary.model_copy(
        update={
            "computed_lower": int(result.lower_bound),
            "exact": int(result.exact) if result.exact is not None else None,
            "method": result.method,
        }
    )


def code_record(H: ParityCheckMatrix, distance: Optional[DistanceResult] = None, witness: Optional[BitVector] = None) -> ClassicalCodeRecord:
    """Compute rank and dimension of H and attach the stated parameters."""
    r = rank(H.H)
    syndrome_zero = None
    if witness is not None:
        syndrome_zero = H.H.multiply_vector(witness).weight == 0
    return ClassicalCodeRecord(
        construction=H.construction,
        s=H.s,
        n=H.n,
        n_rows=H.H.n_rows,
        rank=r,
        k=H.n - r,
        claim=classical_claim(H.construction, H.s),
        row_weights=tuple(sorted(set(H.H.row_weights()))),
        self_orthogonal=is_self_orthogonal(H.H),
        distance=distance,
        witness=witness,
        witness_syndrome_zero=syndrome_zero,
    )


def with_distance(record: ClassicalCodeRecord, distance: DistanceResult) -> ClassicalCodeRecord:
    """Return a copy of record carrying a distance result."""
    return replace(record, distance=distance)


def _check(name: str, claim: object, computed: object, ok: bool, soft: bool = False, note: str = "") -> ClaimCheck:
    if ok:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FLAG if soft else Verdict.FAIL
    return ClaimCheck(name=name, claim=str(claim), computed=str(computed), verdict=verdict, note=note)


def _distance_check(name: str, claim: Interval, result: Optional[DistanceResult], witness: Optional[int]) -> ClaimCheck:
    if result is not None and result.is_exact:
        return _check(name, claim, result.exact, result.exact in claim)
    lower = int(result.lower_bound) if result is not None else 0
    upper = witness
    computed = f"[{lower}, {upper if upper is not None else 'inf'}]"
    if upper is not None and upper < claim.lo:
        return _check(name, claim, computed, False)
    if claim.hi is not None and lower > claim.hi:
        return _check(name, claim, computed, False)
    upper_ok = claim.hi is None or (upper is not None and upper <= claim.hi)
    if lower >= claim.lo and upper_ok:
        return _check(name, claim, computed, True, note="certified by witness and capped search")
    return ClaimCheck(
        name=name,
        claim=str(claim),
        computed=computed,
        verdict=Verdict.UNVERIFIED,
        note="consistent with the computed bounds but not certified",
    )


def verify_record(record: ClassicalCodeRecord) -> list[ClaimCheck]:
    """Compare a record's computed parameters with the stated ones."""
    prefix = f"{record.construction.value}.s{record.s}"
    claim = record.claim
    # H_SE: the stated k and rank conflict with each other, so mismatches are flagged.
    soft = record.construction is Construction.H_SE
    checks = [
        _check(f"{prefix}.shape", (claim.n_rows, claim.n_cols), (record.n_rows, record.n), (record.n_rows, record.n) == (claim.n_rows, claim.n_cols)),
        _check(f"{prefix}.row_weight", claim.row_weight, list(record.row_weights), record.row_weights == (claim.row_weight,)),
        _check(f"{prefix}.rank", claim.rank, record.rank, record.rank in claim.rank, soft=soft),
        _check(
            f"{prefix}.k",
            claim.k,
            record.k,
            record.k in claim.k,
            soft=soft,
            note="stated dimension disagrees with rank 3^s+1" if soft and record.k not in claim.k else "",
        ),
    ]
    if record.construction is Construction.H_SE:
        checks.append(_check(f"{prefix}.not_self_orthogonal", False, record.self_orthogonal, not record.self_orthogonal))
    elif record.construction is not Construction.M_PI:
        checks.append(_check(f"{prefix}.self_orthogonal", True, record.self_orthogonal, record.self_orthogonal))

    witness_w = None
    if record.witness is not None:
        expected = witness_weight(record.construction, record.s)
        checks.append(
            _check(
                f"{prefix}.witness",
                f"weight {expected}, zero syndrome",
                f"weight {record.witness.weight}, zero syndrome={record.witness_syndrome_zero}",
                record.witness.weight == expected and bool(record.witness_syndrome_zero),
            )
        )
        if record.witness_syndrome_zero:
            witness_w = record.witness.weight
    if record.distance is not None or witness_w is not None:
        checks.append(_distance_check(f"{prefix}.d", claim.d, record.distance, witness_w))
    return checks
