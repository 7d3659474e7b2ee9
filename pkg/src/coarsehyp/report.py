"""Verdict records and the versioned JSON report schema.

Reports are deterministic: given the same config and seed the serialized
document is byte-identical (sorted keys, no timestamps, plain repr floats).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


@dataclass
class Verdict:
    name: str
    passed: bool
    constants: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    sampled: bool = False

    def payload(self):
        return {"name": self.name, "pass": bool(self.passed),
                "constants": _plain(self.constants),
                "witnesses": _plain(self.witnesses),
                "sampled": bool(self.sampled)}


@dataclass
class PropertyReport:
    suite: str
    config: dict
    verdicts: list

    @property
    def passed(self):
        return all(v.passed for v in self.verdicts)

    def payload(self):
        return {"suite": self.suite, "config": _plain(self.config),
                "verdicts": [v.payload() for v in self.verdicts],
                "version": SCHEMA_VERSION}

    def to_json(self):
        return json.dumps(self.payload(), sort_keys=True, indent=2) + "\n"


def _plain(obj):
    """Recursively coerce numpy scalars and odd containers into JSON shapes."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


def merge_reports(reports):
    merged = PropertyReport("merged", {"inputs": [r.suite for r in reports]}, [])
    for r in reports:
        for v in r.verdicts:
            merged.verdicts.append(Verdict(f"{r.suite}:{v.name}", v.passed,
                                           v.constants, v.witnesses, v.sampled))
    return merged


def report_from_payload(payload):
    verdicts = [Verdict(v["name"], v["pass"], v.get("constants", {}),
                        v.get("witnesses", []), v.get("sampled", False))
                for v in payload.get("verdicts", [])]
    return PropertyReport(payload.get("suite", "unknown"),
                          payload.get("config", {}), verdicts)
