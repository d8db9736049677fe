"""Mode-schedule optimization for switched systems (bindings to the C++ core)."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import validation_report_json as _validation_report_json

__version__ = "0.1.0"


def run_validation(seed=1):
    """Run the oracle suite and return the parsed report."""
    return _json.loads(_validation_report_json(seed))
