import math

import pytest
from hypothesis import given, settings, strategies as st

from saskit import sld
from saskit.elements import ELEMENTS, UnknownElement
from saskit.sld import (
    Composition,
    EmptyFormula,
    NonPositiveDensity,
    UnbalancedParenthesis,
    ZeroCount,
    molar_mass,
    neutron_sld,
    parse_formula,
    sld_report,
    xray_sld,
)


class TestParseFormula:
    def test_plain_sequence(self):
        assert parse_formula("C4H8O").entries == {"C": 4, "H": 8, "O": 1}

    def test_group_multiplication(self):
        assert parse_formula("Ca(OH)2").entries == {"Ca": 1, "O": 2, "H": 2}

    def test_isotope_token(self):
        assert parse_formula("D2O").entries == {"D": 2, "O": 1}

    def test_mass_number_notation(self):
        assert parse_formula("H[2]2O").entries == {"D": 2, "O": 1}

    def test_unknown_element(self):
        with pytest.raises(UnknownElement) as err:
            parse_formula("C4H8Q")
        assert err.value.symbol == "Q"

    def test_empty(self):
        with pytest.raises(EmptyFormula):
            parse_formula("")
        with pytest.raises(EmptyFormula):
            parse_formula("   ")

    def test_unbalanced(self):
        with pytest.raises(UnbalancedParenthesis):
            parse_formula("Ca(OH2")
        with pytest.raises(UnbalancedParenthesis):
            parse_formula("CaOH)2")

    def test_zero_count(self):
        with pytest.raises(ZeroCount):
            parse_formula("C0H4")

    def test_fractional_counts(self):
        comp = parse_formula("H1.5D0.5O")
        assert comp.entries == pytest.approx({"H": 1.5, "D": 0.5, "O": 1})

    def test_nested_groups(self):
        comp = parse_formula("((CH3)2SiO)3")
        assert comp.entries == {"C": 6, "H": 18, "Si": 3, "O": 3}

    def test_repeated_symbols_accumulate(self):
        assert parse_formula("CH3CH3").entries == {"C": 2, "H": 6}


class TestMolarMass:
    # [DERIVED] sums of bundled standard atomic weights
    def test_water(self):
        assert molar_mass(parse_formula("H2O")) == pytest.approx(18.015, abs=1e-3)

    def test_heavy_water(self):
        assert molar_mass(parse_formula("D2O")) == pytest.approx(20.028, abs=1e-3)

    def test_carbon(self):
        assert molar_mass(parse_formula("C")) == pytest.approx(12.011, abs=1e-9)


class TestNeutronSld:
    # [DERIVED] frozen from an independent hand calculation with NIST b values
    # (b_D=6.671 fm, b_H=-3.739 fm, b_O=5.803 fm) done before this module.
    def test_heavy_water(self):
        real, imag = neutron_sld(parse_formula("D2O"), 1.1044)
        assert real == pytest.approx(6.35788, abs=5e-4)
        assert 0 <= imag < 1e-4

    def test_light_water(self):
        real, imag = neutron_sld(parse_formula("H2O"), 0.997)
        assert real == pytest.approx(-0.55825, abs=5e-4)
        assert imag == pytest.approx(6.167e-5, rel=1e-2)

    def test_density_linearity_exact(self):
        comp = parse_formula("C4H8O")
        r1, i1 = neutron_sld(comp, 0.889)
        r2, i2 = neutron_sld(comp, 2 * 0.889)
        assert r2 == pytest.approx(2 * r1, rel=1e-12)
        assert i2 == pytest.approx(2 * i1, rel=1e-12)

    def test_nonpositive_density(self):
        with pytest.raises(NonPositiveDensity):
            neutron_sld(parse_formula("H2O"), 0.0)
        with pytest.raises(NonPositiveDensity):
            neutron_sld(parse_formula("H2O"), -1.0)


class TestXraySld:
    def test_water(self):
        # [DERIVED] n=3.3328e22 cm^-3, sum Z=10, r_e=2.8179403 fm
        assert xray_sld(parse_formula("H2O"), 0.997) == pytest.approx(9.39169, abs=1e-3)

    def test_carbon(self):
        # [DERIVED] n*6*r_e with n = 2.0*N_A/12.011
        n = 2.0 * 6.02214076e23 / 12.011
        expected = n * 6 * 2.8179403e-13 * 1e-10
        assert xray_sld(parse_formula("C"), 2.0) == pytest.approx(expected, rel=1e-12)

    def test_formula_scaling_is_intensive(self):
        comp = parse_formula("C2H6OS")
        doubled = comp.scaled(2)
        assert xray_sld(comp, 1.1) == pytest.approx(xray_sld(doubled, 1.1), rel=1e-12)


class TestSldReport:
    def test_heavy_water_report(self):
        result = sld_report("D2O", 1.1044)
        assert result.sld_real == pytest.approx(6.36, abs=0.06)
        assert result.molar_mass == pytest.approx(20.03, abs=0.01)

    def test_light_water_volume(self):
        result = sld_report("H2O", 0.997)
        assert result.sld_real == pytest.approx(-0.56, abs=0.02)
        assert result.molecular_volume == pytest.approx(30.0, abs=0.05)

    def test_empty_formula(self):
        with pytest.raises(EmptyFormula):
            sld_report("", 1.0)

    def test_volume_consistency_invariant(self):
        result = sld_report("Ca(OH)2", 2.21)
        expected = result.molar_mass / (2.21 * 6.02214076e23) * 1e24
        assert result.molecular_volume == pytest.approx(expected, rel=1e-9)


_SYMBOLS = sorted(ELEMENTS)


@st.composite
def compositions(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    symbols = draw(st.lists(st.sampled_from(_SYMBOLS), min_size=n, max_size=n, unique=True))
    counts = draw(st.lists(
        st.one_of(st.integers(min_value=1, max_value=40).map(float),
                  st.floats(min_value=0.125, max_value=16.0, allow_nan=False)),
        min_size=n, max_size=n))
    return Composition(dict(zip(symbols, counts)))


class TestProperties:
    @given(compositions(), st.floats(min_value=0.01, max_value=25.0),
           st.floats(min_value=0.01, max_value=100.0))
    @settings(max_examples=60, deadline=None)
    def test_density_linearity(self, comp, density, k):
        r1, i1 = neutron_sld(comp, density)
        rk, ik = neutron_sld(comp, k * density)
        assert rk == pytest.approx(k * r1, rel=1e-12, abs=1e-300)
        assert ik == pytest.approx(k * i1, rel=1e-12, abs=1e-300)

    @given(compositions(), st.integers(min_value=2, max_value=9))
    @settings(max_examples=60, deadline=None)
    def test_formula_scaling_invariance(self, comp, k):
        scaled = comp.scaled(k)
        r1, i1 = neutron_sld(comp, 1.3)
        r2, i2 = neutron_sld(scaled, 1.3)
        assert r2 == pytest.approx(r1, rel=1e-9, abs=1e-300)
        assert i2 == pytest.approx(i1, rel=1e-9, abs=1e-300)
        assert xray_sld(scaled, 1.3) == pytest.approx(xray_sld(comp, 1.3), rel=1e-9)

    @given(compositions())
    @settings(max_examples=80, deadline=None)
    def test_parser_round_trip(self, comp):
        assert parse_formula(comp.to_formula()) == comp

    @given(compositions(), st.floats(min_value=0.01, max_value=25.0))
    @settings(max_examples=60, deadline=None)
    def test_signs(self, comp, density):
        _, imag = neutron_sld(comp, density)
        assert imag >= 0
        assert xray_sld(comp, density) > 0
