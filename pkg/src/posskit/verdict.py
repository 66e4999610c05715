from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    """Outcome of a condition check; ``witness`` explains the first failure."""

    ok: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.ok


PASS = Check(True)


def fail(msg: str) -> Check:
    return Check(False, msg)
