from pydantic import BaseModel, Field, computed_field
from typing import List, Literal, Optional
from enum import Enum


class Status(str, Enum):
    DONE = "done"
    NO_COUNTEREXAMPLE = "no_counterexample"
    ANALYZED = "analyzed"
    INVALID_INPUT = "invalid_input"
    RUNTIME_ERROR = "runtime_error"
    OUT_OF_FUEL = "out_of_fuel"
    COUNTEREXAMPLE = "counterexample"
    VIOLATIONS = "violations"


EXIT_CODES = {
    Status.DONE: 0,
    Status.NO_COUNTEREXAMPLE: 0,
    Status.ANALYZED: 0,
    Status.INVALID_INPUT: 1,
    Status.RUNTIME_ERROR: 2,
    Status.OUT_OF_FUEL: 3,
    Status.COUNTEREXAMPLE: 4,
    Status.VIOLATIONS: 5,
}

Command = Literal["run", "vcg", "absint", "check"]


class RunConfig(BaseModel):
    command: Command
    program: str
    source: str = "<inline>"
    env: str = ""
    abenv: str = ""
    post: Optional[str] = None
    fuel: int = Field(10000, ge=0)
    samples: int = Field(1000, ge=1)
    seed: int = 0
    format: Literal["text", "json"] = "text"
    verify: bool = False


class ConditionReport(BaseModel):
    hyp: str
    concl: str


class CounterexampleReport(BaseModel):
    condition: str
    valuation: str


class ViolationReport(BaseModel):
    path: str
    assertion: str


class Report(BaseModel):
    command: Command
    status: Status
    env: Optional[str] = None
    precondition: Optional[str] = None
    conditions: Optional[List[ConditionReport]] = None
    counterexample: Optional[List[CounterexampleReport]] = None
    annotated: Optional[str] = None
    final: Optional[str] = None
    violations: Optional[List[ViolationReport]] = None
    outcome: Optional[str] = None
    message: Optional[str] = None

    @computed_field
    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True, indent=2)

    def to_text(self) -> str:
        """Line-oriented rendering with the same content as the JSON form"""
        lines = []
        if self.env is not None:
            lines.append(self.env if self.command == "run" else f"env: {self.env}")
        if self.annotated is not None:
            lines.append(self.annotated)
        if self.final is not None:
            lines.append(f"final: {self.final}")
        if self.precondition is not None:
            lines.append(f"precondition: {self.precondition}")
        for c in self.conditions or []:
            lines.append(f"condition: {c.hyp} -> {c.concl}")
        for ce in self.counterexample or []:
            lines.append(f"counterexample: {ce.condition} fails at {ce.valuation or 'all zero'}")
        for v in self.violations or []:
            lines.append(f"violation at {v.path}: {v.assertion}")
        if self.outcome is not None:
            lines.append(f"outcome: {self.outcome}")
        if self.message is not None:
            lines.append(f"message: {self.message}")
        lines.append(f"status: {self.status.value}")
        return "\n".join(lines)


class CommandRequest(BaseModel):
    program: str
    env: str = ""
    abenv: str = ""
    post: Optional[str] = None
    fuel: Optional[int] = Field(None, ge=0)
    samples: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None
    verify: bool = False
