"""Closed-form parameters stated for the PG(2,2^s) code constructions.

Every function takes s and returns the value (or inclusive interval) that the
construction is claimed to have. Nothing here is computed from matrices; the
verification layer compares these against measured values.
"""

from dataclasses import dataclass
from typing import Optional

from pg_qldpc.configuration import Construction, Family


@dataclass(frozen=True)
class Interval:
    """Inclusive integer interval; ``hi is None`` means unbounded above."""

    lo: int
    hi: Optional[int]

    @classmethod
    def exact(cls, value: int) -> "Interval":
        """Return the one-point interval."""
        return cls(value, value)

    @property
    def is_exact(self) -> bool:
        """Whether the interval holds one value."""
        return self.hi == self.lo

    @property
    def is_empty(self) -> bool:
        """Whether the upper bound lies below the lower bound."""
        return self.hi is not None and self.hi < self.lo

    def __contains__(self, value: int) -> bool:
        """Return whether value lies in the interval."""
        return value >= self.lo and (self.hi is None or value <= self.hi)

    def __str__(self) -> str:
        """Render a single value or a bracketed range."""
        if self.is_exact:
            return str(self.lo)
        return f"[{self.lo}, {'inf' if self.hi is None else self.hi}]"


##########################
# Plane and hyperoval counts
##########################

def plane_size(s: int) -> int:
    """Return q^2 + q + 1, the number of points (and of lines)."""
    q = 2**s
    return q * q + q + 1


def incidence_rank(s: int) -> int:
    """Return the GF(2) rank 3^s + 1 of the incidence matrix."""
    return 3**s + 1


def hyperoval_table(s: int) -> dict[str, int]:
    """Return point and line counts with respect to a regular hyperoval."""
    q = 2**s
    return {
        "hyperoval_points": q + 2,
        "secant_lines": (q * q + 3 * q + 2) // 2,
        "skew_lines": (q * q - q) // 2,
        "secant_per_point": (q + 2) // 2,
        "skew_per_point": q // 2,
    }


def conic_table(s: int) -> dict[str, int]:
    """Return line counts with respect to a conic, before the nucleus is added."""
    q = 2**s
    return {
        "tangent_lines": q + 1,
        "secant_lines": (q + 1) * q // 2,
        "skew_lines": q * (q - 1) // 2,
    }


##########################
# Classical codes
##########################

@dataclass(frozen=True)
class ClassicalClaim:
    """Stated shape, rank, dimension and distance of a classical construction."""

    n_rows: int
    n_cols: int
    row_weight: int
    rank: Interval
    k: Interval
    d: Interval


def classical_claim(construction: Construction, s: int) -> ClassicalClaim:
    """Return the stated parameters of a classical construction."""
    q = 2**s
    full = q * q + q + 2
    if construction is Construction.M_PI:
        return ClassicalClaim(
            n_rows=plane_size(s), n_cols=plane_size(s), row_weight=q + 1,
            rank=Interval.exact(incidence_rank(s)),
            k=Interval.exact(plane_size(s) - incidence_rank(s)),
            d=Interval.exact(q + 2),
        )
    if construction is Construction.M_PI_PRIME:
        return ClassicalClaim(
            n_rows=plane_size(s), n_cols=full, row_weight=q + 2,
            rank=Interval.exact(incidence_rank(s)),
            k=Interval.exact(4**s - 3**s + 2**s + 1),
            d=Interval.exact(q + 2),
        )
    if construction is Construction.H_SK:
        return ClassicalClaim(
            n_rows=(q * q - q) // 2, n_cols=q * q, row_weight=q + 2,
            rank=Interval(3**s - 2**s, incidence_rank(s)),
            k=Interval(4**s - 3**s - 1, 4**s - 3**s + 2**s),
            d=Interval(2 ** (s - 1) + 1, 2**s),
        )
    if construction is Construction.H_SEA:
        return ClassicalClaim(
            n_rows=(q * q + 3 * q + 2) // 2, n_cols=full, row_weight=q + 2,
            rank=Interval.exact(incidence_rank(s)),
            k=Interval.exact(4**s - 3**s + 2**s + 1),
            d=Interval(2 ** (s - 1) + 2, 2**s + 2),
        )
    # H_SE: the stated dimension and the rank used in its derivation disagree;
    # both are kept as stated.
    return ClassicalClaim(
        n_rows=(q * q + 3 * q + 2) // 2, n_cols=q * q, row_weight=q,
        rank=Interval.exact(incidence_rank(s)),
        k=Interval.exact(4**s - 3**s + 2**s + 1),
        d=Interval(2 ** (s - 1) + 2, 2**s + 2),
    )


def witness_weight(construction: Construction, s: int) -> int:
    """Return the weight of the line-based codeword that realizes the upper distance bound."""
    q = 2**s
    return {
        Construction.M_PI: q + 2,
        Construction.M_PI_PRIME: q + 2,
        Construction.H_SEA: q + 2,
        Construction.H_SK: q,
        Construction.H_SE: q + 2,
    }[construction]


##########################
# Quantum codes
##########################

@dataclass(frozen=True)
class QuantumClaim:
    """Stated length, dimension, distance and stabilizer count of a family."""

    n: int
    K: Interval
    D: Interval
    stabilizer_count: int
    d_equality: bool


def quantum_claim(family: Family, s: int) -> QuantumClaim:
    """Return the stated parameters of a quantum family."""
    base = 4**s - 2 * 3**s
    if family is Family.PI:
        return QuantumClaim(
            n=4**s + 2**s + 2,
            K=Interval.exact(base + 2**s),
            D=Interval.exact(2**s + 2),
            stabilizer_count=2 ** (2 * s + 1) + 2 ** (s + 1) + 2,
            d_equality=True,
        )
    if family is Family.ASYM:
        return QuantumClaim(
            n=4**s,
            K=Interval(base + 2, base + 2**s - 1),
            D=Interval(2 ** (s - 1) + 1, None),
            stabilizer_count=4**s + 2**s + 1,
            d_equality=False,
        )
    if family is Family.SYM_SK:
        return QuantumClaim(
            n=4**s,
            K=Interval(base - 2, base + 2 ** (s + 1)),
            D=Interval(2 ** (s - 1) + 1, None),
            stabilizer_count=4**s - 2**s,
            d_equality=False,
        )
    return QuantumClaim(
        n=4**s + 2**s + 2,
        K=Interval.exact(base + 2**s),
        D=Interval(2 ** (s - 1) + 2, None),
        stabilizer_count=4**s + 3 * 2**s + 2,
        d_equality=False,
    )
