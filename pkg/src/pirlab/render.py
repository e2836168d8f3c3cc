"""Exact-value rendering helpers: decimals, fractions, JSON metadata."""

import decimal
import hashlib
import json
import os
from fractions import Fraction

from .errors import ParameterError

DEFAULT_PRECISION = 5
PRECISION_ENV = "PIRLAB_PRECISION"


def precision():
    """Decimal places used for table output; overridable via PIRLAB_PRECISION."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        places = int(raw)
    except ValueError:
        raise ParameterError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
    if not 1 <= places <= 50:
        raise ParameterError(f"{PRECISION_ENV} must be in 1..50, got {places}")
    return places


def decimal_str(value, places=None):
    """Render an exact rational as a fixed-point decimal string.

    Rounding is banker's rounding (round half to even) at the requested
    number of places, computed from the exact fraction so values like
    84/305 print as 0.27541 rather than a truncated 0.27540.
    """
    if places is None:
        places = precision()
    frac = Fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = places + 30
        ctx.rounding = decimal.ROUND_HALF_EVEN
        d = decimal.Decimal(frac.numerator) / decimal.Decimal(frac.denominator)
        quantum = decimal.Decimal(1).scaleb(-places)
        return str(d.quantize(quantum, rounding=decimal.ROUND_HALF_EVEN))


def frac_str(value):
    """Render a Fraction as "p/q", or "p" when the denominator is 1."""
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def parse_frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a rational number: {text!r}")


def canonical_json(obj):
    """Stable JSON rendering used for hashing and byte-reproducible output."""
    return json.dumps(obj, indent=2, sort_keys=False)


def input_digest(obj):
    """Hex digest identifying the resolved inputs of a CLI invocation."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def meta_header(command, inputs, seed=None):
    from . import __version__

    return {
        "tool": "pirlab",
        "version": __version__,
        "input_sha256": input_digest({"command": command, "inputs": inputs}),
        "seed": seed,
    }
