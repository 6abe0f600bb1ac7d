import hashlib
import json
import logging
from dataclasses import dataclass, field

from .conventions import CONVENTIONS

logger = logging.getLogger(__name__)


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=str)


def digest(data) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


@dataclass
class RunReport:
    """Machine-readable outcome of one CLI run; identical inputs give identical JSON."""

    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    assertions: dict = field(default_factory=dict)
    conventions: dict = field(default_factory=CONVENTIONS.as_dict)
    timing: dict | None = None

    @property
    def inputs_digest(self) -> str:
        return digest({"command": self.command, "inputs": self.inputs})

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.assertions.values())

    def to_dict(self) -> dict:
        data = {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "conventions": self.conventions,
            "outputs": self.outputs,
            "assertions": self.assertions,
        }
        if self.timing is not None:
            data["timing"] = self.timing
        return data

    def to_json(self) -> str:
        return canonical_json(self.to_dict())
