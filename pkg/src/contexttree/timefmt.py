"""ISO-8601 <-> POSIX-seconds conversion at microsecond resolution."""
from __future__ import annotations

import math
import re
from datetime import datetime, timedelta, timezone

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_US = timedelta(microseconds=1)
_FRACTION = re.compile(r"(\.\d{1,6})\d*")


def parse_instant(text: str) -> float:
    """Parse an ISO-8601 timestamp (or bare POSIX seconds) as UTC seconds.

    Naive timestamps are taken to be UTC. Fractions beyond microseconds are
    truncated, so ``2013-11-08 14:09:51.000000000 Z`` is accepted.
    """
    s = text.strip()
    try:
        value = float(s)
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise ValueError(f"timestamp is not finite: {text!r}")
        return round(value * 1_000_000) / 1_000_000
    s = s.replace(" Z", "Z")
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    s = _FRACTION.sub(lambda m: m.group(1).ljust(7, "0"), s, count=1)
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return ((dt - _EPOCH) // _US) / 1_000_000


def format_instant(t: float) -> str:
    us = round(t * 1_000_000)
    dt = _EPOCH + timedelta(microseconds=us)
    if us % 1_000_000:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")
