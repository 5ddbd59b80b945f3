"""Configuration management for the PG(2,2^s) code toolkit."""

import os
from enum import Enum
from typing import Any, Optional

from langchain_core.runnables import RunnableConfig
from pydantic import BaseModel, Field

ENV_PREFIX = "PGQLDPC_"

# Field arithmetic is tabulated up to GF(256); code families stay small enough
# for dense elimination.
MAX_FIELD_S = 8
MAX_CODE_S = 4


class Family(Enum):
    """The four quantum code families built from PG(2,2^s)."""

    PI = "pi"
    ASYM = "asym"
    SYM_SK = "sym-sk"
    SYM_SE = "sym-se"


class Construction(Enum):
    """Classical parity-check constructions."""

    M_PI = "m-pi"
    M_PI_PRIME = "m-pi-prime"
    H_SK = "h-sk"
    H_SEA = "h-sea"
    H_SE = "h-se"


class Configuration(BaseModel):
    """Main configuration class for construction, verification and simulation."""

    # Search Configuration
    jobs: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Worker processes for distance enumeration and Monte Carlo trials. Results never depend on this value.",
    )
    distance_cap: int = Field(
        default=5,
        ge=1,
        le=12,
        description="Largest codeword weight searched when exhaustive enumeration is out of budget.",
    )
    enumeration_budget_bits: int = Field(
        default=26,
        ge=1,
        le=30,
        description="Largest code dimension k for which all 2^k codewords are enumerated.",
    )
    # Decoder Configuration
    bp_max_iters: int = Field(
        default=100,
        ge=1,
        description="Maximum number of flooding iterations of the sum-product decoder.",
    )
    bp_clip: float = Field(
        default=25.0,
        gt=0,
        description="Symmetric clipping magnitude for log-likelihood-ratio messages.",
    )
    bp_damping: float = Field(
        default=0.7,
        ge=0.0,
        lt=1.0,
        description="Weight of the previous check-to-bit message when updating it; 0 is plain flooding.",
    )
    # Simulation Configuration
    trials: int = Field(
        default=1000,
        ge=1,
        description="Monte Carlo trials per grid point.",
    )
    seed: int = Field(
        default=0,
        ge=0,
        description="Master seed for the Monte Carlo harness.",
    )
    # Report Configuration
    stamp: bool = Field(
        default=False,
        description="Attach generation time and host metadata to JSON reports (breaks byte-for-byte reproducibility).",
    )

    @classmethod
    def from_runnable_config(
        cls, config: Optional[RunnableConfig] = None
    ) -> "Configuration":
        """Create a Configuration instance from a RunnableConfig.

        Environment variables (``PGQLDPC_<FIELD>``) take precedence over the
        ``configurable`` mapping, which takes precedence over field defaults.
        """
        configurable = config.get("configurable", {}) if config else {}
        field_names = list(cls.model_fields.keys())
        values: dict[str, Any] = {
            field_name: os.environ.get(
                f"{ENV_PREFIX}{field_name.upper()}", configurable.get(field_name)
            )
            for field_name in field_names
        }
        return cls(**{k: v for k, v in values.items() if v is not None})


def family_constructions(family: Family) -> tuple[Construction, ...]:
    """Return the classical constructions a quantum family is assembled from."""
    return {
        Family.PI: (Construction.M_PI_PRIME,),
        Family.ASYM: (Construction.H_SK, Construction.H_SE),
        Family.SYM_SK: (Construction.H_SK,),
        Family.SYM_SE: (Construction.H_SEA,),
    }[family]
