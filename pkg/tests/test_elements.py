import pytest

from saskit.elements import (
    BadElementRecord,
    ELEMENTS,
    UnknownElement,
    lookup,
    parse_element_table,
)


class TestBundledTable:
    REQUIRED = ["H", "D", "C", "N", "O", "S", "Ca", "Cl", "Na", "Si"]

    @pytest.mark.parametrize("symbol", REQUIRED)
    def test_required_symbols_present(self, symbol):
        record = ELEMENTS[symbol]
        assert record.atomic_mass > 0
        assert record.atomic_number >= 1

    def test_isotope_aliases(self):
        assert lookup("H[2]").symbol == "D"
        assert lookup("H[3]").symbol == "T"
        assert lookup("H[1]").symbol == "H"

    def test_unknown_symbol(self):
        with pytest.raises(UnknownElement):
            lookup("Qq")

    def test_deuterium_values(self):
        d = ELEMENTS["D"]
        assert d.atomic_mass == pytest.approx(2.0141, abs=1e-4)
        assert d.b_coh == pytest.approx(6.671, abs=1e-3)


class TestTableFormat:
    def test_documented_format_parses(self):
        text = ("# comment line\n"
                "\n"
                "Xx 42 99.5 1.25 0.5\n")
        table = parse_element_table(text)
        assert table["Xx"].atomic_number == 42
        assert table["Xx"].atomic_mass == 99.5
        assert table["Xx"].b_coh == 1.25
        assert table["Xx"].sigma_abs_2200 == 0.5

    def test_wrong_field_count_rejected(self):
        with pytest.raises(BadElementRecord):
            parse_element_table("Xx 42 99.5 1.25\n")

    def test_nonnumeric_rejected(self):
        with pytest.raises(BadElementRecord):
            parse_element_table("Xx 42 heavy 1.25 0.5\n")

    def test_nonpositive_mass_rejected(self):
        with pytest.raises(BadElementRecord):
            parse_element_table("Xx 42 -1.0 1.25 0.5\n")
