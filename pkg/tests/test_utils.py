"""Tests for settings, logging, parsing and normalization helpers"""

import logging
import math
from fractions import Fraction

import numpy as np
import orjson
import pytest

from stellar.cli.parsing import parse_angle, parse_axis, parse_cycles, parse_su2
from stellar.config import get_settings, override_settings
from stellar.errors import DomainError, InvalidPermutationError, ResourceLimitError
from stellar.services.schur import schur_basis
from stellar.utils.logging_config import JsonFormatter
from stellar.utils.normalization import (
    format_half,
    multiset_deviation,
    normalize_vector,
    round_floats,
    single_linkage,
    twice,
)


class TestSettings:
    """Tests for the settings layer"""

    def test_defaults(self):
        """Test the documented defaults"""
        settings = get_settings()

        assert settings.cluster_eps == 1e-6
        assert settings.nmax == 12
        assert settings.seed == 42

    def test_environment_override(self, monkeypatch):
        """Test that STELLAR_ variables override defaults"""
        monkeypatch.setenv("STELLAR_NMAX", "3")

        with pytest.raises(ResourceLimitError):
            schur_basis(4)

    def test_override_ignores_none(self):
        """Test that None leaves a setting untouched"""
        settings = override_settings(seed=7, nmax=None)

        assert settings.seed == 7
        assert settings.nmax == 12
        assert get_settings().seed == 7


class TestJsonFormatter:
    """Tests for JsonFormatter"""

    def test_extra_fields(self):
        """Test that extra= fields land in the JSON object"""
        record = logging.LogRecord("stellar.test", logging.INFO, __file__, 1, "suite %s", ("rigid",), None)
        record.trials = 4

        payload = orjson.loads(JsonFormatter().format(record))

        assert payload["msg"] == "suite rigid"
        assert payload["level"] == "INFO"
        assert payload["trials"] == 4
        assert "args" not in payload


class TestParsing:
    """Tests for command-line value parsers"""

    @pytest.mark.parametrize(
        "text,expected",
        [("pi", math.pi), ("-pi", -math.pi), ("pi/3", math.pi / 3), ("-2π/3", -2 * math.pi / 3), ("0.25", 0.25)],
    )
    def test_angles(self, text, expected):
        """Test plain and pi-multiple angles"""
        assert parse_angle(text) == pytest.approx(expected)

    def test_bad_angle(self):
        """Test that junk angles are domain errors"""
        with pytest.raises(DomainError):
            parse_angle("half")

    def test_axes(self):
        """Test named and component axes"""
        assert np.allclose(parse_axis("y").n, [0, 1, 0])
        assert np.allclose(parse_axis("1:1:0").n, [1 / math.sqrt(2), 1 / math.sqrt(2), 0])
        with pytest.raises(DomainError):
            parse_axis("0:0:0")

    def test_su2_argument(self):
        """Test the AXIS,ANGLE form"""
        axis, angle = parse_su2("x,pi/2")

        assert np.allclose(axis.n, [1, 0, 0])
        assert angle == pytest.approx(math.pi / 2)

    def test_cycles(self):
        """Test cycle notation with and without commas"""
        assert parse_cycles("(12)(3)", 3) == (2, 1, 3)
        assert parse_cycles("(1,3)", 3) == (3, 2, 1)
        assert parse_cycles("(123)", 3) == (2, 3, 1)

    @pytest.mark.parametrize("text", ["2 1 3", "(14)", "(12)(23)", ""])
    def test_bad_cycles(self, text):
        """Test one-line notation, out-of-range and overlapping cycles"""
        with pytest.raises(InvalidPermutationError):
            parse_cycles(text, 3)


class TestNormalization:
    """Tests for normalization helpers"""

    def test_half_integers(self):
        """Test twice and format_half"""
        assert twice("3/2") == 3
        assert twice(Fraction(5, 2)) == 5
        assert format_half(3) == "3/2"
        assert format_half(4) == "2"
        with pytest.raises(DomainError):
            twice(0.3)

    def test_zero_vector(self):
        """Test that zero vectors cannot be normalized"""
        with pytest.raises(DomainError):
            normalize_vector([0, 0])

    def test_round_floats(self):
        """Test significant-digit rounding inside nested documents"""
        rounded = round_floats({"a": [1.23456789, {"b": -0.0}], "c": "x"}, 3)

        assert rounded == {"a": [1.23, {"b": 0.0}], "c": "x"}

    def test_single_linkage_chains(self):
        """Test that groups chain through close neighbours"""
        points = np.array([[1, 0, 0], [0.999, 0.0447, 0], [0, 0, 1]], dtype=float)

        assert single_linkage(points, 0.1) == [[0, 1], [2]]

    def test_multiset_deviation_ignores_order(self):
        """Test optimal pairing of point multisets"""
        a = np.eye(3)

        assert multiset_deviation(a, a[::-1]) == 0.0
