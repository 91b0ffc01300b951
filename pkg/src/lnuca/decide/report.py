from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PROPERTIES = (
    "nilpotent",
    "periodic",
    "eventually-periodic",
    "cayley-hamilton",
    "injective",
    "post-surjective",
)


@dataclass
class DecisionReport:
    """Outcome of one decision.

    ``certificate`` may hold library objects (specs, configurations); the io
    layer turns them into JSON.
    """

    property: str
    verdict: bool
    certificate: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict
