"""Bundled datasets."""

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Tuple

from src.core.exceptions import InvalidConfig
from src.utils.validators import ParsedColumn, parse_csv_column


@dataclass(frozen=True)
class Dataset:
    name: str
    filename: str
    columns: Tuple[str, ...]
    units: str
    description: str

    def read_text(self) -> str:
        return resources.files(__name__).joinpath(self.filename).read_text(encoding="utf-8")

    def column(self, name: str) -> ParsedColumn:
        if name not in self.columns:
            raise InvalidConfig(
                f"Dataset {self.name} has no column {name!r}",
                {"dataset": self.name, "columns": list(self.columns)},
            )
        return parse_csv_column(self.read_text(), name)

    def labels(self) -> List[str]:
        return parse_csv_labels(self.read_text())


def parse_csv_labels(text: str) -> List[str]:
    """First-column labels of a headed CSV."""
    rows = [line.split(",", 1)[0].strip() for line in text.splitlines() if line.strip()]
    return rows[1:]


DATASETS: Dict[str, Dataset] = {
    "hk_pay": Dataset(
        name="hk_pay",
        filename="hk_pay.csv",
        columns=("junior", "senior"),
        units="percent",
        description=(
            "Annual Hong Kong civil service pay adjustment rates by tax year, "
            "2007-2008 to 2024-2025, for junior and senior staff"
        ),
    ),
}


def get_dataset(name: str) -> Dataset:
    """Look up a bundled dataset by name."""
    try:
        return DATASETS[name]
    except KeyError:
        raise InvalidConfig(
            f"Unknown dataset: {name}", {"dataset": name, "available": sorted(DATASETS)}
        ) from None
