"""Machine-checkable claims attached to builder outputs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Claim:
    """What a builder promises about its configuration.

    ``operation`` names the engine call that checks it and ``expected`` the
    verdict that call should return.
    """

    builder: str
    operation: str
    expected: object = True
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"builder": self.builder, "operation": self.operation, "expected": self.expected, "params": self.params}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> Claim:
        return cls(d["builder"], d["operation"], d.get("expected", True), dict(d.get("params", {})))
