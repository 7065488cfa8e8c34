from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class JointRealization(BaseModel):
    """Channel gains, powers and rates of all users in one slot."""

    model_config = ConfigDict(frozen=True)

    bob_gains: List[float] = Field(..., description="Per-user power gain towards the receiver.")
    eve_gains: Optional[List[float]] = Field(default=None, description="Per-user power gain towards Eve, absent without Eve.")
    powers: List[float] = Field(..., description="Per-user transmit power.")
    rates: List[float] = Field(..., description="Per-user transmit rate in bits per channel use.")

    @model_validator(mode="after")
    def _check_invariants(self) -> "JointRealization":
        K = len(self.bob_gains)
        vectors = {"powers": self.powers, "rates": self.rates}
        if self.eve_gains is not None:
            vectors["eve_gains"] = self.eve_gains
        for name, values in vectors.items():
            if len(values) != K:
                raise ValueError(f"{name} has {len(values)} entries, expected {K}")
        if any(v < 0 for v in [*self.bob_gains, *(self.eve_gains or []), *self.powers]):
            raise ValueError("gains and powers must be nonnegative")
        if any(r <= 0 for r in self.rates):
            raise ValueError("rates must be strictly positive")
        return self

    @property
    def num_users(self) -> int:
        return len(self.bob_gains)

    def arrays(self):
        h = np.asarray(self.bob_gains, dtype=float)
        g = None if self.eve_gains is None else np.asarray(self.eve_gains, dtype=float)
        return h, g, np.asarray(self.powers, dtype=float), np.asarray(self.rates, dtype=float)
