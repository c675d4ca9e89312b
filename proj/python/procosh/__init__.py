"""Finite-truncation kernel for profinite cosheaf computations.

The heavy lifting lives in the C++ extension; this package re-exports it and
adds small conveniences on top.
"""

import json as _json

try:
    from procosh._core import *  # noqa: F401,F403
    from procosh import _core as _ext
except ImportError:  # development layout: extension next to the build tree
    import os
    import sys

    _ext_dir = os.environ.get("PROCOSH_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
    import _core as _ext


def run_suite(name, seed=7, truncation=4, window=3, cases=0):
    """Run a verification suite and return its report as a dict."""
    return _json.loads(_ext.run_suite_json(name, seed, truncation, window, cases))


def run_all(seed=7, truncation=4, window=3):
    """Run every suite; returns {suite_name: report}."""
    return {name: run_suite(name, seed, truncation, window) for name in _ext.suite_names()}
