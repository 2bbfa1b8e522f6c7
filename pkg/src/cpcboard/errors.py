"""Exception hierarchy shared by every cpcboard module."""

from __future__ import annotations


class CpcboardError(Exception):
    """Base class for all cpcboard errors."""


class SpaceSyntaxError(CpcboardError):
    """Space file is not a well-formed JSON document."""


class SchemaError(CpcboardError):
    """Space document deviates from the expected schema (missing field,
    wrong type, unknown key)."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ValidationError(CpcboardError):
    """One or more invariant violations; ``violations`` holds the records."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownSlot(CpcboardError):
    def __init__(self, slot: str):
        super().__init__(f"unknown slot {slot!r}")
        self.slot = slot


class UnknownComponent(CpcboardError):
    def __init__(self, slot: str | None, name: str):
        where = f" in slot {slot!r}" if slot else ""
        super().__init__(f"unknown component {name!r}{where}")
        self.slot = slot
        self.name = name


class ConfigError(CpcboardError):
    """Search configuration violates its invariants."""


class IllegalConfiguration(CpcboardError):
    """A pipeline configuration contains a value outside its declared domain."""


class DomainError(CpcboardError):
    """A value lies outside an axis domain."""


class UnknownExpansion(CpcboardError):
    """An expansion references a (slot, component) pair absent from the space."""


class EmptySnapshot(CpcboardError):
    """Operation requires at least one candidate."""


class UnknownPipeline(CpcboardError):
    def __init__(self, pipeline_id: str):
        super().__init__(f"unknown pipeline {pipeline_id!r}")
        self.pipeline_id = pipeline_id


class UnknownMetric(CpcboardError):
    def __init__(self, metric: str):
        super().__init__(f"unknown metric {metric!r}")
        self.metric = metric


class InsufficientData(CpcboardError):
    """Fewer data points than the query needs."""


class UnknownRun(CpcboardError):
    def __init__(self, run_id: str):
        super().__init__(f"unknown run {run_id!r}")
        self.run_id = run_id


class QueryError(CpcboardError):
    """Unknown query name or missing/invalid query parameter."""
