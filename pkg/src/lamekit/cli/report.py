"""
Machine-readable run reports.
"""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field


class Assertion(BaseModel):
    """One numeric or exact check with its verdict"""
    name: str = Field(description="Check identifier, e.g. 'genus2.contour_deviation'")
    value: Optional[float] = Field(default=None, description="Measured value; None for exact checks")
    threshold: Optional[float] = Field(default=None, description="Upper bound the value must stay below")
    passed: bool = Field(description="Verdict")
    detail: str = Field(default="", description="Failure reason or the compared objects")

    @classmethod
    def at_most(cls, name: str, value: float, threshold: float, detail: str = "") -> "Assertion":
        value = float(value)
        return cls(name=name, value=value, threshold=threshold, passed=bool(value <= threshold), detail=detail)

    @classmethod
    def exact(cls, name: str, passed: bool, detail: str = "") -> "Assertion":
        return cls(name=name, passed=bool(passed), detail=detail)


class RunReport(BaseModel):
    """Outcome of one CLI command"""
    command: str = Field(description="Subcommand as typed, e.g. 'periods genus2'")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Effective parameters and tolerances")
    outputs: Dict[str, Any] = Field(default_factory=dict, description="Command results, complex values as [re, im]")
    residuals: Dict[str, float] = Field(default_factory=dict)
    assertions: List[Assertion] = Field(default_factory=list)
    wall_time: float = Field(default=0.0, description="Seconds")

    @computed_field
    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def failures(self) -> List[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=indent)
