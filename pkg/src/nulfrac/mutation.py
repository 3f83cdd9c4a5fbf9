"""Deliberate kernel corruption, used to prove the identity checks are not vacuous.

Kernel code asks :func:`kernel_exponent` for the exponent it is about to use.
Outside a :func:`mutated_kernel` block the value is returned unchanged.  The
active mutation lives in a :class:`contextvars.ContextVar`, so it is local to
the current thread / task and never leaks into concurrent callers.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Iterator

#: Kernel sites that honour mutations.
KERNEL_SITES = (
    "frac_sum",
    "rl_direct",
    "rl_residue",
    "central_sum",
    "central_direct",
)


@dataclass(frozen=True)
class KernelMutation:
    """Replace the exponent ``e`` used at ``site`` by ``sign * e + offset``."""

    site: str
    sign: float = -1.0
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.site not in KERNEL_SITES:
            raise ValueError(f"unknown kernel site {self.site!r}")


_ACTIVE: contextvars.ContextVar[KernelMutation | None] = contextvars.ContextVar(
    "nulfrac_kernel_mutation", default=None
)


def kernel_exponent(site: str, exponent: float) -> float:
    """Return the exponent to use at ``site`` (mutated if a mutation is active)."""
    mut = _ACTIVE.get()
    if mut is None or mut.site != site:
        return exponent
    return mut.sign * exponent + mut.offset


@contextlib.contextmanager
def mutated_kernel(mutation: KernelMutation | None) -> Iterator[None]:
    """Activate ``mutation`` for the duration of the ``with`` block."""
    token = _ACTIVE.set(mutation)
    try:
        yield
    finally:
        _ACTIVE.reset(token)
