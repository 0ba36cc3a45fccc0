"""Full verification suite, one test per criterion.

Each test prints a single pass/fail line (run pytest with -s to see them)
and then asserts, so a failure reports the criterion's own diagnostic.
"""

import pytest

from ellop import acceptance


def _check(name, fn):
    if fn.__code__.co_argcount:
        ok, detail = fn(0)
    else:
        ok, detail = fn()
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.mark.parametrize(
    "name,fn", acceptance.CRITERIA, ids=[n for n, _ in acceptance.CRITERIA]
)
def test_criterion(name, fn):
    _check(name, fn)


def test_suite_is_complete():
    assert len(acceptance.CRITERIA) == 11
    assert len({name for name, _ in acceptance.CRITERIA}) == 11
