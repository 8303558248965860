import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lpmforge.eventlog import CsvMapping, EventLog, parse_csv

DATA = Path(__file__).parent.parent / "data"


@pytest.fixture(scope="session")
def household() -> EventLog:
    return parse_csv(
        (DATA / "household.csv").read_bytes(),
        CsvMapping("case", "activity", "timestamp"),
    )


@pytest.fixture(scope="session")
def table_12_1a() -> EventLog:
    return EventLog.from_labels(
        [
            list("EBABAFACBD"),
            list("EBAFEBABAF"),
            list("ABCDACDBEF"),
            list("ACDBEEBAF"),
        ],
        prefix="sigma",
    )
