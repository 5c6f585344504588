"""Text formats for set files and report serialization helpers.

Point-set and affine-set files share the header "q p e modulus-code"; each
following non-empty line holds one element as "a-code b-code".  Duplicate
lines are rejected, and the header must describe the canonical field (the
modulus code doubles as a checksum of the encoding convention).

These functions translate between text and objects only; file handling
lives with the command-line front end.
"""

from __future__ import annotations

from fractions import Fraction

from .affgroup import AffSet
from .errors import FormatError
from .ff import Field, construct_field
from .plane import INF, PlanePointSet, Slope, slope_to_text


def _parse_header(line: str, lineno: int) -> Field:
    parts = line.split()
    if len(parts) != 4:
        raise FormatError(lineno, 1, "header must be 'q p e modulus-code'")
    try:
        q, p, e, mcode = (int(t) for t in parts)
    except ValueError:
        raise FormatError(lineno, 1, "header fields must be integers") from None
    try:
        field = construct_field(p, e)
    except Exception as exc:
        raise FormatError(lineno, 1, f"bad field parameters: {exc}") from None
    if field.q != q:
        raise FormatError(lineno, 1, f"q = {q} does not equal {p}^{e} = {field.q}")
    if field.modulus_code() != mcode:
        raise FormatError(
            lineno, 1,
            f"modulus code {mcode} is not the canonical {field.modulus_code()}")
    return field


def _parse_pairs(text: str):
    """Yield (lineno, a, b) for each element line after the header."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise FormatError(1, 1, "missing header line")
    field = _parse_header(lines[0].strip(), 1)
    seen = set()
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise FormatError(lineno, 1, "element lines must be 'a-code b-code'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            column = 1 if not parts[0].lstrip("-").isdigit() else len(parts[0]) + 2
            raise FormatError(lineno, column, "codes must be integers") from None
        if not 0 <= a < field.q:
            raise FormatError(lineno, 1, f"code {a} out of range [0, {field.q})")
        if not 0 <= b < field.q:
            raise FormatError(lineno, len(parts[0]) + 2,
                              f"code {b} out of range [0, {field.q})")
        if (a, b) in seen:
            raise FormatError(lineno, 1, f"duplicate element {a} {b}")
        seen.add((a, b))
        pairs.append((lineno, a, b))
    return field, pairs


def parse_point_set(text: str) -> PlanePointSet:
    field, pairs = _parse_pairs(text)
    return PlanePointSet(field, [(a, b) for _, a, b in pairs])


def parse_aff_set(text: str) -> AffSet:
    field, pairs = _parse_pairs(text)
    for lineno, a, _ in pairs:
        if a == 0:
            raise FormatError(lineno, 1, "affine elements need a nonzero a-code")
    return AffSet(field, [(a, b) for _, a, b in pairs])


def _header(field: Field) -> str:
    return f"{field.q} {field.spec_string()}"


def serialize_point_set(A: PlanePointSet) -> str:
    lines = [_header(A.field)]
    lines.extend(f"{a} {b}" for a, b in A.sorted_points())
    return "\n".join(lines) + "\n"


def serialize_aff_set(A: AffSet) -> str:
    lines = [_header(A.field)]
    lines.extend(f"{a} {b}" for a, b in A.sorted_elems())
    return "\n".join(lines) + "\n"


def slopes_to_json(dirs) -> list:
    """Sorted direction list with "inf" spelled literally."""
    return [slope_to_text(d) if d == INF else d for d in sorted(dirs)]


def fraction_to_json(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
