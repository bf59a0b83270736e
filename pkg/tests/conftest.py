import json
import os
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
sys.path.insert(0, HERE)

from semistab import _cdsearch, diophantine  # noqa: E402

try:
    from semistab import _cdsearch_ext
except ImportError:  # extension not built
    _cdsearch_ext = None


def load_data(name: str):
    with open(os.path.join(HERE, "data", name)) as fh:
        return json.load(fh)


@pytest.fixture(params=["compiled", "python"])
def backend(request, monkeypatch):
    """Run a test once per search kernel."""
    if request.param == "compiled":
        if _cdsearch_ext is None:
            pytest.skip("compiled kernel not built")
        monkeypatch.setattr(diophantine, "_kernel", _cdsearch_ext)
    else:
        monkeypatch.setattr(diophantine, "_kernel", _cdsearch)
    return request.param
