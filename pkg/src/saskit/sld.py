"""Chemical formula parsing and scattering length density calculation.

Neutron SLDs follow the standard number-density sum: with n the formula-unit
density (cm^-3),

    sld_real = n * sum(count_j * b_coh_j)
    sld_imag = n * sum(count_j * sigma_abs_j) / (2 * lambda_2200)

where b_coh is in fm and sigma_abs is the 2200 m/s (lambda = 1.798 A)
absorption cross-section in barn.  The imaginary part uses the 1/v absorber
approximation, so it is wavelength-independent by construction; strongly
resonant absorbers (Gd, Cd) are therefore approximate.  X-ray SLD is
n * r_e * sum(count_j * Z_j) with anomalous dispersion ignored.  All SLDs are
returned in units of 1e-6 A^-2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .elements import lookup
from .errors import SaskitError

AVOGADRO = 6.02214076e23        # mol^-1
R_E_FM = 2.8179403              # classical electron radius, fm
LAMBDA_2200 = 1.798             # 2200 m/s neutron wavelength, Angstrom

# fm = 1e-13 cm, so n[cm^-3]*b[fm] is 1e-13 cm^-2 = 1e-29 A^-2; in 1e-6 A^-2
# numeric units the net factor is 1e-10 (likewise for sigma/(2*lambda) terms).
_CM2_TO_UNITS = 1e-10


class EmptyFormula(SaskitError):
    pass


class UnbalancedParenthesis(SaskitError):
    def __init__(self, position: int):
        super().__init__(f"unbalanced parenthesis at position {position}")
        self.position = position


class ZeroCount(SaskitError):
    def __init__(self, position: int):
        super().__init__(f"zero or negative count at position {position}")
        self.position = position


class FormulaSyntaxError(SaskitError):
    def __init__(self, position: int, detail: str):
        super().__init__(f"cannot parse formula at position {position}: {detail}")
        self.position = position


class NonPositiveDensity(SaskitError):
    pass


@dataclass(frozen=True)
class Composition:
    """Parsed chemical formula: ordered map of element symbol -> count."""

    entries: dict[str, float]

    def __post_init__(self):
        if not self.entries:
            raise EmptyFormula("composition has no entries")
        for symbol, count in self.entries.items():
            lookup(symbol)  # raises UnknownElement
            if count <= 0:
                raise ZeroCount(0)

    def scaled(self, k: float) -> "Composition":
        return Composition({s: c * k for s, c in self.entries.items()})

    def to_formula(self) -> str:
        """Canonical text form; parse_formula(c.to_formula()) == c."""
        parts = []
        for symbol, count in self.entries.items():
            parts.append(symbol + _format_count(count))
        return "".join(parts)


def _format_count(count: float) -> str:
    if count == 1:
        return ""
    if count == int(count):
        return str(int(count))
    return repr(count)


@dataclass(frozen=True)
class SldResult:
    sld_real: float          # 1e-6 A^-2
    sld_imag: float          # 1e-6 A^-2
    sld_xray: float          # 1e-6 A^-2
    molar_mass: float        # g/mol
    number_density: float    # formula units per cm^3
    molecular_volume: float  # A^3

    def to_dict(self) -> dict[str, float]:
        return {
            "sld_real": self.sld_real,
            "sld_imag": self.sld_imag,
            "sld_xray": self.sld_xray,
            "molar_mass": self.molar_mass,
            "number_density": self.number_density,
            "molecular_volume": self.molecular_volume,
        }


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch


def parse_formula(text: str) -> Composition:
    """Parse a chemical formula like ``C4H8O``, ``Ca(OH)2``, ``D2O`` or ``H[2]2O``.

    Counts may be fractional (``C0.5H1.5``) to describe average formulas.
    Group counts multiply through; repeated symbols accumulate.
    """
    if text is None or not text.strip():
        raise EmptyFormula("empty formula")
    scanner = _Scanner(text.strip())
    entries = _parse_group(scanner, depth=0)
    if scanner.peek() == ")":
        raise UnbalancedParenthesis(scanner.pos)
    return Composition(entries)


def _parse_group(scanner: _Scanner, depth: int) -> dict[str, float]:
    entries: dict[str, float] = {}
    while True:
        ch = scanner.peek()
        if ch == "":
            if depth > 0:
                raise UnbalancedParenthesis(scanner.pos)
            return entries
        if ch == ")":
            if depth == 0:
                raise UnbalancedParenthesis(scanner.pos)
            return entries
        if ch == "(":
            open_pos = scanner.pos
            scanner.take()
            inner = _parse_group(scanner, depth + 1)
            if scanner.peek() != ")":
                raise UnbalancedParenthesis(open_pos)
            scanner.take()
            count = _parse_count(scanner)
            if not inner:
                raise FormulaSyntaxError(open_pos, "empty group")
            for symbol, inner_count in inner.items():
                entries[symbol] = entries.get(symbol, 0.0) + inner_count * count
            continue
        if ch.isspace():
            scanner.take()
            continue
        symbol = _parse_symbol(scanner)
        count = _parse_count(scanner)
        symbol = lookup(symbol).symbol  # resolve aliases, raise UnknownElement
        entries[symbol] = entries.get(symbol, 0.0) + count


def _parse_symbol(scanner: _Scanner) -> str:
    start = scanner.pos
    ch = scanner.peek()
    if not ch.isupper():
        raise FormulaSyntaxError(start, f"expected element symbol, found {ch!r}")
    symbol = scanner.take()
    while scanner.peek().islower():
        symbol += scanner.take()
    if scanner.peek() == "[":
        scanner.take()
        digits = ""
        while scanner.peek().isdigit():
            digits += scanner.take()
        if not digits or scanner.peek() != "]":
            raise FormulaSyntaxError(start, "malformed isotope mass number")
        scanner.take()
        symbol += f"[{digits}]"
    return symbol


def _parse_count(scanner: _Scanner) -> float:
    start = scanner.pos
    digits = ""
    while scanner.peek().isdigit() or scanner.peek() == ".":
        digits += scanner.take()
    if not digits:
        return 1.0
    try:
        count = float(digits)
    except ValueError:
        raise FormulaSyntaxError(start, f"bad count {digits!r}") from None
    if count <= 0:
        raise ZeroCount(start)
    return count


def molar_mass(composition: Composition) -> float:
    """Sum of count-weighted atomic masses, g/mol."""
    return sum(count * lookup(symbol).atomic_mass
               for symbol, count in composition.entries.items())


def number_density(composition: Composition, density: float) -> float:
    """Formula units per cm^3 at the given mass density (g/cm^3)."""
    if density <= 0:
        raise NonPositiveDensity(f"density must be positive, got {density}")
    return density * AVOGADRO / molar_mass(composition)


def neutron_sld(composition: Composition, density: float) -> tuple[float, float]:
    """Real and imaginary neutron SLD in 1e-6 A^-2."""
    n = number_density(composition, density)
    sum_b = 0.0
    sum_sigma = 0.0
    for symbol, count in composition.entries.items():
        rec = lookup(symbol)
        sum_b += count * rec.b_coh
        sum_sigma += count * rec.sigma_abs_2200
    sld_real = n * sum_b * 1e-13 * _CM2_TO_UNITS
    # barn = 1e-24 cm^2; lambda converted to cm
    sld_imag = n * sum_sigma * 1e-24 / (2.0 * LAMBDA_2200 * 1e-8) * _CM2_TO_UNITS
    return sld_real, sld_imag


def xray_sld(composition: Composition, density: float) -> float:
    """X-ray SLD in 1e-6 A^-2 (Thomson scattering from Z electrons per atom)."""
    n = number_density(composition, density)
    sum_z = sum(count * lookup(symbol).atomic_number
                for symbol, count in composition.entries.items())
    return n * R_E_FM * 1e-13 * sum_z * _CM2_TO_UNITS


def sld_report(formula: str, density: float) -> SldResult:
    """Parse a formula and compute the full SLD summary for one material."""
    composition = parse_formula(formula)
    mass = molar_mass(composition)
    n = number_density(composition, density)
    sld_re, sld_im = neutron_sld(composition, density)
    sld_x = xray_sld(composition, density)
    volume = mass / (density * AVOGADRO) * 1e24
    return SldResult(sld_real=sld_re, sld_imag=sld_im, sld_xray=sld_x,
                     molar_mass=mass, number_density=n, molecular_volume=volume)
