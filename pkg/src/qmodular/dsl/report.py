"""Query records, deterministic JSON and text rendering, exit codes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_PARSE = 2
EXIT_RUNTIME = 3


@dataclass
class Record:
    query: str
    kind: str
    line: int = 0
    col: int = 0
    inputs: Dict[str, str] = field(default_factory=dict)
    verdict: Optional[str] = None
    value: Optional[str] = None
    witness: Optional[str] = None
    diff: Optional[Dict[str, str]] = None
    extra: Dict[str, object] = field(default_factory=dict)
    assertion: bool = False
    passed: bool = True
    timing: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "query": self.query,
            "kind": self.kind,
            "position": {"line": self.line, "col": self.col},
            "inputs": dict(sorted(self.inputs.items())),
        }
        for key in ("verdict", "value", "witness", "diff"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        out.update(sorted(self.extra.items()))
        if timing:
            out["timing"] = round(self.timing, 6)
        return out

    def headline(self) -> str:
        if self.assertion:
            return "PASS" if self.passed else "FAIL"
        parts = [p for p in (self.verdict, self.value) if p is not None]
        return "  ".join(parts)


@dataclass
class Report:
    records: List[Record] = field(default_factory=list)
    definitions: int = 0
    error: Optional[Exception] = None

    @property
    def assertions(self) -> List[Record]:
        return [r for r in self.records if r.assertion]

    @property
    def failed(self) -> List[Record]:
        return [r for r in self.assertions if not r.passed]

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return getattr(self.error, "exit_code", EXIT_RUNTIME)
        return EXIT_ASSERTION if self.failed else EXIT_OK

    def summary(self) -> dict:
        out = {
            "definitions": self.definitions,
            "queries": len(self.records),
            "assertions": len(self.assertions),
            "passed": len(self.assertions) - len(self.failed),
            "failed": len(self.failed),
            "exit_code": self.exit_code,
        }
        if self.error is not None:
            out["error"] = str(self.error)
        return out

    def to_json(self, timing: bool = True) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "records": [r.to_json(timing) for r in self.records],
            "summary": self.summary(),
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        lines = []
        for i, r in enumerate(self.records, 1):
            lines.append(f"[{i}] {r.line}:{r.col} {r.query}")
            lines.append(f"    => {r.headline()}")
            if r.witness is not None:
                lines.append(f"    witness: {r.witness}")
            if r.extra:
                lines.append("    " + ", ".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}"
                                               for k, v in sorted(r.extra.items())))
            if r.diff:
                lines.append(f"    lhs: {r.diff['lhs']}")
                lines.append(f"    rhs: {r.diff['rhs']}")
        s = self.summary()
        if self.error is not None:
            lines.append(f"error: {self.error}")
        lines.append(f"summary: {s['queries']} queries, {s['assertions']} assertions, "
                     f"{s['passed']} passed, {s['failed']} failed")
        return "\n".join(lines) + "\n"
