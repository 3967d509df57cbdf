"""Element table for scattering length density calculations.

The table is loaded from a bundled whitespace-delimited data file with one
record per line: ``SYMBOL Z MASS B_COH SIGMA_ABS`` (mass in g/mol, bound
coherent scattering length in fm, 2200 m/s absorption cross-section in barn).
Lines starting with ``#`` are comments.  The isotopes D and T are first-class
symbols; ``H[2]`` and ``H[3]`` resolve to them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import SaskitError


class UnknownElement(SaskitError):
    def __init__(self, symbol: str):
        super().__init__(f"unknown element symbol {symbol!r}")
        self.symbol = symbol


class BadElementRecord(SaskitError):
    pass


@dataclass(frozen=True)
class ElementRecord:
    symbol: str
    atomic_number: int
    atomic_mass: float      # g/mol
    b_coh: float            # fm, real part
    sigma_abs_2200: float   # barn, at 2200 m/s

    def __post_init__(self):
        if self.atomic_mass <= 0:
            raise BadElementRecord(f"{self.symbol}: atomic mass must be positive")
        if self.atomic_number < 1:
            raise BadElementRecord(f"{self.symbol}: atomic number must be >= 1")


# mass-number notation aliases, e.g. "H[2]" -> "D"
_ISOTOPE_ALIASES = {"H[1]": "H", "H[2]": "D", "H[3]": "T"}


def parse_element_table(text: str) -> dict[str, ElementRecord]:
    """Parse the documented element-table format into a symbol-keyed dict."""
    table: dict[str, ElementRecord] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 5:
            raise BadElementRecord(f"line {lineno}: expected 5 fields, got {len(fields)}")
        symbol = fields[0]
        try:
            rec = ElementRecord(symbol, int(fields[1]), float(fields[2]),
                                float(fields[3]), float(fields[4]))
        except ValueError as exc:
            raise BadElementRecord(f"line {lineno}: {exc}") from exc
        table[symbol] = rec
    return table


def _load_bundled() -> dict[str, ElementRecord]:
    text = resources.files("saskit.data").joinpath("neutron_elements.dat").read_text()
    return parse_element_table(text)


ELEMENTS: dict[str, ElementRecord] = _load_bundled()

_SYMBOL_RE = re.compile(r"^[A-Z][a-z]*(\[\d+\])?$")


def lookup(symbol: str, table: dict[str, ElementRecord] | None = None) -> ElementRecord:
    """Resolve a symbol (including D/T and Symbol[massnumber] forms) to a record."""
    table = ELEMENTS if table is None else table
    key = _ISOTOPE_ALIASES.get(symbol, symbol)
    try:
        return table[key]
    except KeyError:
        raise UnknownElement(symbol) from None


def is_symbol_like(token: str) -> bool:
    return bool(_SYMBOL_RE.match(token))
