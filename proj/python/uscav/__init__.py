"""Python bindings for the uscav core: spectra, polaritons and master equations."""
import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, verify as _verify


def verify(params, threads=0):
    """Invariant report as a dict."""
    return json.loads(_verify(params, threads))


def params_dict(params):
    return json.loads(params.to_json())
