"""Exact multi-type allocation mechanisms (MRP, MPS, MGD) and property checks.

Assignments are dicts ``{agent: {bundle: Fraction}}`` with 1-based agents.
"""

import json
import os
from fractions import Fraction

from ._core import GuardViolation, Instance, InputError
from . import _core

__all__ = [
    "GuardViolation",
    "InputError",
    "Instance",
    "check",
    "compare",
    "decompose",
    "load_instance",
    "replay",
    "run",
]


def load_instance(source):
    """Load an instance from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        return Instance.from_json(json.dumps(source))
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        return Instance.load(os.fspath(source))
    return Instance.from_json(source)


def _tiebreak_text(tiebreak):
    if tiebreak is None:
        return None
    if isinstance(tiebreak, (str, os.PathLike)) and os.path.exists(tiebreak):
        with open(tiebreak) as f:
            return f.read()
    return json.dumps(tiebreak)


def _assignment_text(assignment):
    shares = {
        str(agent): {bundle: str(Fraction(value)) for bundle, value in row.items()}
        for agent, row in assignment.items()
    }
    return json.dumps({"shares": shares})


def _shares(text):
    return {
        int(agent): {bundle: Fraction(value) for bundle, value in row.items()}
        for agent, row in json.loads(text)["shares"].items()
    }


def _lottery(text):
    out = []
    for outcome in json.loads(text)["lottery"]:
        entry = {
            "probability": Fraction(outcome["probability"]),
            "assignment": {int(a): b for a, b in outcome["assignment"].items()},
        }
        if "priority" in outcome:
            entry["priority"] = outcome["priority"]
        out.append(entry)
    return out


def run(instance, mechanism="mps", mode="exact", seed=0, tiebreak=None):
    """Run a mechanism; mode is exact, sample or mc:K (the last two for mrp)."""
    return _shares(_core.run(instance, mechanism, mode, seed, _tiebreak_text(tiebreak)))


def check(instance, assignment, properties=None, mechanism="", misreports="linear",
          transforms="generated", tiebreak=None):
    """Check properties; returns {name: {"pass", "cases_checked", "detail", "summary"}}."""
    if isinstance(properties, str):
        properties = [properties]
    return _core.check(instance, _assignment_text(assignment), list(properties or []), mechanism,
                       misreports, transforms, _tiebreak_text(tiebreak))


def compare(instance, a, b):
    """Per agent: "mutual", "a", "b" (strict sd-dominance) or "incomparable"."""
    out = {}
    for j, (ab, ba) in enumerate(_core.compare(instance, _assignment_text(a), _assignment_text(b)), start=1):
        out[j] = "mutual" if ab and ba else "a" if ab else "b" if ba else "incomparable"
    return out


def decompose(instance, assignment=None, tiebreak=None):
    """MGD lottery over serial dictatorships, or a lottery realising `assignment`.

    Returns None when `assignment` is not a lottery over discrete assignments.
    """
    text = _core.decompose(instance, None if assignment is None else _assignment_text(assignment),
                           _tiebreak_text(tiebreak))
    return None if text is None else _lottery(text)


def replay():
    """Re-run the built-in reference fixtures; returns (ok, report)."""
    return _core.replay()
