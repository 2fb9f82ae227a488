import pytest

from geocohort.extraction import Extractor
from geocohort.gazetteer import load_gazetteer, load_tables
from geocohort.synthetic import write_gazetteer


@pytest.fixture(scope="session")
def tables():
    return load_tables()


@pytest.fixture(scope="session")
def gazetteer_path(tmp_path_factory):
    return write_gazetteer(tmp_path_factory.mktemp("gaz") / "gazetteer.tsv")


@pytest.fixture(scope="session")
def index(gazetteer_path, tables):
    return load_gazetteer(gazetteer_path, region_names=tables.region_names,
                          state_abbrev=tables.state_abbrev)


@pytest.fixture(scope="session")
def extractor(index, tables):
    return Extractor(index, tables)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
