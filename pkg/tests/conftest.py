import itertools

import pytest

from smoothind import make_profile

FAMILIES = [("A", 1), ("A", 2), ("C", 2), ("G", 2)]
FIELDS = [(1, 1), (1, 2), (2, 1)]
PRIMES = [3, 5]


def catalog_profiles():
    return [make_profile(fam, r, p, e, f)
            for (fam, r), (e, f), p in itertools.product(FAMILIES, FIELDS, PRIMES)]


def profile_id(prof):
    rs = prof.root_system
    return f"{rs.family}{rs.rank}-p{prof.p}-e{prof.e}f{prof.f}"


CATALOG = catalog_profiles()

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=CATALOG, ids=profile_id)
def catalog_profile(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
