"""Resource limits and defaults shared by all modules."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class ResourceLimitError(RuntimeError):
    """A configured budget or cap was exceeded.

    This signals a mis-set limit, never a wrong answer.
    """


@dataclass(frozen=True)
class Config:
    step_budget: int = 10_000_000
    universe_cap: int = 2_000_000
    basis_cap: int = 20_000
    deepening_rounds: int = 5
    models: int = 3
    depth: int | None = None
    verify_depth: int = 2

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if f.name == "verify_depth":
                ok = v >= 0
            elif f.name == "depth":
                ok = v >= 0
            else:
                ok = v > 0
            if not ok:
                raise ValueError(f"{f.name} must be positive, got {v}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "Config":
        """Defaults, then ``UIPC_*`` variables, then explicit overrides."""
        environ = os.environ if environ is None else environ
        values = {}
        for var, name in (("UIPC_STEP_BUDGET", "step_budget"),
                          ("UIPC_MODELS_CAP", "universe_cap"),
                          ("UIPC_BASIS_CAP", "basis_cap")):
            if environ.get(var):
                values[name] = int(environ[var])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)


DEFAULT = Config()
