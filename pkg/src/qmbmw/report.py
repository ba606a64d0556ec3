"""Check records and report assembly shared by all verification suites."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    suite: str
    check: str
    params: dict
    status: str                 # "pass" | "fail" | "skipped"
    witness: list | None = None
    elapsed_ms: float = 0.0

    def to_json(self):
        doc = {
            "suite": self.suite,
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "elapsedMs": round(self.elapsed_ms, 3),
        }
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass
class Suite:
    """Collects named checks for one verification suite."""

    name: str
    params: dict = field(default_factory=dict)
    serializer: object = None
    records: list = field(default_factory=list)

    def __post_init__(self):
        self._t0 = time.monotonic()

    def _elapsed(self):
        t = time.monotonic()
        dt = (t - self._t0) * 1000.0
        self._t0 = t
        return dt

    def _serialize(self, v):
        if self.serializer is not None:
            try:
                return self.serializer(v)
            except Exception:
                pass
        return repr(v)

    def record(self, check, status, witness=None):
        rec = CheckRecord(self.name, check, dict(self.params), status, witness, self._elapsed())
        self.records.append(rec)
        return rec

    def true(self, check, ok, witness=None):
        return self.record(check, "pass" if ok else "fail", None if ok else (witness or []))

    def equal(self, check, lhs, rhs, max_witness=3):
        """Exact TensorOperator equality with entry witnesses on failure."""
        diff = lhs - rhs
        if diff.is_zero():
            return self.record(check, "pass")
        witness = []
        for rd, cd, v in sorted(diff.entries())[:max_witness]:
            witness.append({
                "row": [i + 1 for i in rd],
                "col": [j + 1 for j in cd],
                "value": self._serialize(v),
            })
        return self.record(check, "fail", witness)

    def zero(self, check, op, max_witness=3):
        if op.is_zero():
            return self.record(check, "pass")
        witness = []
        for rd, cd, v in sorted(op.entries())[:max_witness]:
            witness.append({
                "row": [i + 1 for i in rd],
                "col": [j + 1 for j in cd],
                "value": self._serialize(v),
            })
        return self.record(check, "fail", witness)

    def skipped(self, check, reason):
        return self.record(check, "skipped", [{"reason": reason}])

    @property
    def failures(self):
        return [r for r in self.records if r.status == "fail"]

    def ok(self):
        return not self.failures
