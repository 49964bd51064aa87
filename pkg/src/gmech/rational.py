"""Lossless string encoding of rationals and the JSON shapes built on it."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MalformedInputError


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Floats are refused: they would smuggle rounding into exact computations.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise MalformedInputError(f"rational must be a 'p/q' string or int, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise MalformedInputError(f"rational must be a 'p/q' string or int, got {value!r}")
    text = value.strip()
    if "." in text or "e" in text.lower():
        raise MalformedInputError(f"decimal notation not accepted: {value!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational {value!r}") from exc


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_vector(xs: Iterable) -> list[str]:
    return [format_rational(x) for x in xs]


def parse_edge_key(key: str) -> tuple[int, int]:
    parts = key.split("-")
    if len(parts) != 2:
        raise MalformedInputError(f"edge key must look like 'i-j', got {key!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise MalformedInputError(f"edge key must look like 'i-j', got {key!r}") from exc


def format_edge_key(edge: tuple[int, int]) -> str:
    return f"{edge[0]}-{edge[1]}"


def parse_entries(obj) -> dict[tuple[int, int], Fraction]:
    """Decode ``{"entries": {"1-2": "3/2", ...}}`` into an edge -> Fraction dict."""
    if not isinstance(obj, Mapping) or "entries" not in obj:
        raise MalformedInputError("expected an object with an 'entries' field")
    raw = obj["entries"]
    if not isinstance(raw, Mapping):
        raise MalformedInputError("'entries' must be an object keyed by 'i-j'")
    out = {}
    for key, value in raw.items():
        edge = parse_edge_key(key)
        if edge in out:
            raise MalformedInputError(f"duplicate edge {key!r}")
        out[edge] = parse_rational(value)
    return out


def format_entries(entries: Mapping[tuple[int, int], Fraction]) -> dict:
    return {"entries": {format_edge_key(e): format_rational(v) for e, v in sorted(entries.items())}}
