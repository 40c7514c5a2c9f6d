"""Line-oriented `key = value` sieve configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Poly
from .region import Region, region_from_bits


class ConfigError(Exception):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass
class SieveConfig:
    f0: Poly
    f1: Poly
    q_min: int
    q_max: int
    fb_bits0: int
    fb_bits1: int
    lpb_bits0: int
    lpb_bits1: int
    h0: int
    h1: int
    h2: int
    threshold0: int | None = None
    threshold1: int | None = None
    skip_below: int = 32
    nlp_max: int = 2
    pm1_b1: int = 2048
    workers: int = 1
    output: str = "relations.txt"

    def region(self) -> Region:
        return region_from_bits(self.h0, self.h1, self.h2)

    def validate(self):
        if self.f0.degree < 1 or self.f1.degree < 1:
            raise ConfigError("f0 and f1 must be non-constant polynomials")
        if self.q_min > self.q_max:
            raise ConfigError("q_min > q_max")
        if self.q_min < 3:
            raise ConfigError("q_min must be >= 3")
        for name in ("fb_bits0", "fb_bits1", "lpb_bits0", "lpb_bits1"):
            v = getattr(self, name)
            if not 2 <= v <= 40:
                raise ConfigError(f"{name} out of range (2..40)")
        if self.lpb_bits0 < self.fb_bits0 or self.lpb_bits1 < self.fb_bits1:
            raise ConfigError("large prime bound below factor base bound")
        if min(self.h0, self.h1, self.h2) < 1:
            raise ConfigError("region exponents must be >= 1")
        if self.h0 + self.h1 + self.h2 + 2 > 32:
            raise ConfigError("h0+h1+h2+2 exceeds 32-bit cell keys")
        if self.nlp_max < 0:
            raise ConfigError("nlp_max must be >= 0")
        if self.skip_below < 2:
            raise ConfigError("skip_below must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


_INT_KEYS = {
    "q_min",
    "q_max",
    "fb_bits0",
    "fb_bits1",
    "lpb_bits0",
    "lpb_bits1",
    "h0",
    "h1",
    "h2",
    "threshold0",
    "threshold1",
    "skip_below",
    "nlp_max",
    "pm1_b1",
    "workers",
}
_REQUIRED = {
    "f0",
    "f1",
    "q_min",
    "q_max",
    "fb_bits0",
    "fb_bits1",
    "lpb_bits0",
    "lpb_bits1",
    "h0",
    "h1",
    "h2",
}


def parse_config(text: str) -> SieveConfig:
    """Parse `key = value` lines; `#` starts a comment.  Polynomials are
    comma-separated decimal coefficients, constant term first."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected `key = value`", lineno)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in ("f0", "f1"):
            try:
                values[key] = Poly.parse(val)
            except ValueError:
                raise ConfigError(f"bad coefficient list for {key}", lineno) from None
        elif key in _INT_KEYS:
            try:
                values[key] = int(val)
            except ValueError:
                raise ConfigError(f"bad integer for {key}", lineno) from None
        elif key == "output":
            values[key] = val
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)
    missing = _REQUIRED - values.keys()
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")
    return SieveConfig(**values).validate()


def load_config(path: str) -> SieveConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
