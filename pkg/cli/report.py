import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from bounds import BoundReport, jsr_bracket
from config.settings import SETTINGS

from . import __version__


@dataclass
class RunReport:
    """Everything a `bounds` run produced, in a form that serialises deterministically."""

    input_digest: str
    reports: List[BoundReport]
    input_name: Optional[str] = None
    settings: Dict[str, Any] = field(default_factory=lambda: SETTINGS.as_dict())
    version: str = __version__

    @property
    def timings(self) -> Dict[str, float]:
        return {r.method.value: r.elapsed for r in self.reports}

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        lower, upper = jsr_bracket(self.reports)
        out: Dict[str, Any] = {
            "input": {"digest": self.input_digest, "name": self.input_name},
            "version": self.version,
            "settings": dict(self.settings),
            "bounds": [r.to_dict(include_timing) for r in self.reports],
            "bracket": {"lower": lower, "upper": upper},
        }
        if include_timing:
            out["timings"] = self.timings
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        return cls(
            input_digest=data["input"]["digest"],
            input_name=data["input"].get("name"),
            reports=[BoundReport.from_dict(r) for r in data.get("bounds", [])],
            settings=dict(data.get("settings") or {}),
            version=data.get("version", __version__),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))
