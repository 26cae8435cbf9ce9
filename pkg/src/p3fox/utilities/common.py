"""Common utilties."""

import math
from fractions import Fraction

from p3fox.utilities.errors import UsageError


def parse_real(text: str) -> float:
    """Parse a real literal, rationals "p/q" included."""
    try:
        value = float(Fraction(text.strip())) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"Invalid real literal: {text!r}") from exc

    if not math.isfinite(value):
        raise UsageError(f"Non finite literal: {text!r}")
    return value


def parse_complex(text: str) -> complex:
    """Parse a complex literal.

    Accepts "a", "a+bi", "a-bi", "bi", python style "a+bj" and
    rational parts such as "-223/225".

    Raises:
        UsageError: If the literal can't be parsed or is not finite.

    """
    raw = text.strip().replace(" ", "")
    if not raw:
        raise UsageError("Empty complex literal")

    if raw[-1] not in "ij":
        return complex(parse_real(raw), 0.0)

    body = raw[:-1]

    # split at the last sign that is not an exponent sign
    split = 0
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break

    real_text, imag_text = body[:split], body[split:]
    if imag_text in ("", "+", "-"):
        imag_text += "1"

    real = parse_real(real_text) if real_text else 0.0
    return complex(real, parse_real(imag_text))


def nearest_integer(z: complex) -> int:
    """Nearest integer to the real part of z."""
    return int(round(z.real))


def is_near_integer(z: complex, tol: float) -> bool:
    """Check if z is within tol of an integer."""
    return abs(z - nearest_integer(z)) < tol


def relative_difference(a: complex, b: complex) -> float:
    """Relative difference scaled by the larger modulus."""
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale
