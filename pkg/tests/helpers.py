"""Catalog access shared by the test modules."""
from functools import lru_cache

from algebroid_verify.catalog import catalog_names, load_catalog
from algebroid_verify.checks import Instance

NAMES = catalog_names()


@lru_cache(maxsize=None)
def instance(name: str) -> Instance:
    return Instance.from_document(load_catalog(name))


def with_dirac() -> list:
    return [n for n in NAMES if instance(n).L is not None]


def with_jacobi() -> list:
    return [n for n in NAMES if instance(n).J is not None]


# criterion id -> "PASS"/"FAIL" line; printed by conftest at the end of the run
ACCEPTANCE_LINES: dict = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
