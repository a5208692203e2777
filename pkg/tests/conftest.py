from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_two_dose_lines():
    """The canonical 46-path listing for a two-dose ladder, cohorts of 3."""
    lines = (DATA_DIR / "two_dose_paths.txt").read_text().splitlines()
    assert len(lines) == 46
    return lines
