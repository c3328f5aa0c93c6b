from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ptresolve.setcore import mk_universe  # noqa: E402

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def uni(name: str, n: int):
    return mk_universe(name, list(LETTERS[:n]) if name != "Y" else [f"y{i}" for i in range(n)])


def as_frozen(m) -> frozenset:
    return frozenset(m.labels())


def table_dict(f) -> dict:
    """An operator table as a dict keyed by frozensets of labels."""
    from ptresolve.setcore import labels_of

    return {
        frozenset(labels_of(f.domain, v)): frozenset(labels_of(f.codomain, int(w)))
        for v, w in enumerate(f.entries)
    }


def pairs_of(r) -> set:
    return set(r.pairs())


@pytest.fixture(params=["python", "cython"], scope="module")
def kernel_module(request):
    if request.param == "python":
        from ptresolve import _pykernels

        return _pykernels
    try:
        from ptresolve import _ckernels
    except ImportError:
        pytest.skip("compiled kernels not built")
    return _ckernels
