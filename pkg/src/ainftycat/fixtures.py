"""Expected-report fixtures: a fixed battery of CLI reports per bundled instance."""

from __future__ import annotations

import io as _io
import json

from .cli import run
from .corpus import DEFORMATIONS, UNDEFORMED

BATTERY = {
    "undeformed": [["validate"], ["h0"], ["hh", "--degree", "0"], ["hh", "--degree", "1"]],
    "deformation": [["validate"], ["mc-solve"], ["defclass"], ["egl"]],
}


def report(name: str) -> dict:
    kind = "undeformed" if name in UNDEFORMED else "deformation"
    out = {}
    for cmd in BATTERY[kind]:
        buf = _io.StringIO()
        code = run([cmd[0], name, *cmd[1:], "--json", "--seed", "0"], stdout=buf, stderr=_io.StringIO())
        out[" ".join(cmd)] = {"exit": code, "report": json.loads(buf.getvalue()) if buf.getvalue() else None}
    return out


def dumps_report(name: str) -> str:
    return json.dumps(report(name), indent=2, sort_keys=True) + "\n"


NAMES = UNDEFORMED + DEFORMATIONS
