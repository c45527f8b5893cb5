"""Generator parameters shared by the estimator, generator and CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import InvalidParameterError


@dataclass(frozen=True)
class ModelParams:
    """delta_n new nodes per step; stable factors a_n, a_e; clustering factor p."""

    delta_n: int
    a_n: float
    a_e: float
    p: float

    def __post_init__(self):
        if int(self.delta_n) != self.delta_n or self.delta_n < 0:
            raise InvalidParameterError(f"delta_n must be a non-negative integer, got {self.delta_n}")
        object.__setattr__(self, "delta_n", int(self.delta_n))
        for name in ("a_n", "a_e", "p"):
            value = float(getattr(self, name))
            if not 0.0 < value <= 1.0:
                raise InvalidParameterError(f"{name} must lie in (0, 1], got {value}")
            object.__setattr__(self, name, value)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        return cls(int(data["delta_n"]), data["a_n"], data["a_e"], data["p"])
