"""Exact-arithmetic data synthesis and evaluation for math word problem
skill curricula.

The heavy lifting lives in the compiled extension; this package re-exports
it and locates the bundled unit knowledge base.
"""

import os

from mwpkit._mwpkit import *  # noqa: F401,F403
from mwpkit._mwpkit import UnitKb, MwpkitError  # noqa: F401


def default_kb_path():
    """Path of the bundled unit knowledge base."""
    here = os.path.dirname(os.path.abspath(__file__))
    candidates = [
        os.path.join(here, "data", "units.kb"),
        os.path.join(here, "..", "..", "data", "units.kb"),
    ]
    for path in candidates:
        if os.path.exists(path):
            return path
    raise FileNotFoundError("units.kb not found; pass an explicit path")


def load_default_kb():
    return UnitKb.load(default_kb_path())
