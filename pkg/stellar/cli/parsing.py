"""Parsers for the angle, axis and permutation arguments"""

from __future__ import annotations

import math
import re
from typing import List, Tuple

from stellar.errors import DomainError, InvalidPermutationError
from stellar.models.domain import BlochPoint

AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_angle(text: str) -> float:
    """Accepts plain numbers and multiples of pi such as 'pi/3', '-2π/3', '0.5*pi'"""
    cleaned = text.strip().replace("π", "pi").replace(" ", "")
    numerator, _, denominator = cleaned.partition("/")
    try:
        if numerator.endswith("pi"):
            coefficient = numerator[:-2].rstrip("*")
            value = math.pi * (float(coefficient + "1") if coefficient in ("", "-", "+") else float(coefficient))
        else:
            value = float(numerator)
        if denominator:
            value /= float(denominator)
    except ValueError as exc:
        raise DomainError(f"cannot parse angle {text!r}") from exc
    if not math.isfinite(value):
        raise DomainError(f"angle {text!r} is not finite")
    return value


def parse_axis(text: str) -> BlochPoint:
    """'x', 'y', 'z' or three components separated by colons"""
    key = text.strip().lower()
    if key in AXES:
        return BlochPoint(n=AXES[key])
    parts = key.split(":")
    try:
        components = [float(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"cannot parse axis {text!r}") from exc
    if len(components) != 3 or all(c == 0 for c in components):
        raise DomainError(f"axis {text!r} needs three components, not all zero")
    return BlochPoint(n=components)


def parse_su2(text: str) -> Tuple[BlochPoint, float]:
    axis, sep, angle = text.rpartition(",")
    if not sep:
        raise DomainError(f"expected 'axis,angle', got {text!r}")
    return parse_axis(axis), parse_angle(angle)


def parse_euler(text: str) -> Tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise DomainError(f"expected three Euler angles, got {text!r}")
    alpha, beta, gamma = (parse_angle(p) for p in parts)
    return alpha, beta, gamma


def parse_cycles(text: str, n: int) -> Tuple[int, ...]:
    """
    Cycle notation such as '(12)(3)' or '(1,3)' to a 1-based one-line tuple.

    Raises:
        InvalidPermutationError: For one-line notation, repeated or out-of-range entries
    """
    stripped = text.replace(" ", "")
    if not stripped or _CYCLE.sub("", stripped):
        raise InvalidPermutationError(
            f"permutations must be given in cycle notation like '(12)', got {text!r}"
        )
    image = list(range(1, n + 1))
    seen: List[int] = []
    for content in _CYCLE.findall(stripped):
        tokens = content.split(",") if "," in content else list(content)
        try:
            cycle = [int(t) for t in tokens if t]
        except ValueError as exc:
            raise InvalidPermutationError(f"cannot parse cycle ({content})") from exc
        for element in cycle:
            if element < 1 or element > n:
                raise InvalidPermutationError(f"{element} is outside 1..{n}")
            if element in seen:
                raise InvalidPermutationError(f"{element} appears in more than one cycle")
            seen.append(element)
        for position, element in enumerate(cycle):
            image[element - 1] = cycle[(position + 1) % len(cycle)]
    return tuple(image)
