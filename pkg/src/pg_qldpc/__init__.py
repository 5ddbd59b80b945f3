"""Classical and quantum LDPC codes from the projective plane PG(2,2^s)."""

__version__ = "0.1.0"
