"""Post-condition checks shared by every construction. A failure here is a
bug in the construction, so it raises rather than returning a report."""

from __future__ import annotations

from ..core import (
    System,
    is_weak,
    rainbow_check,
    verify_frame,
    verify_gdd,
    verify_kts,
    verify_pairwise_balance,
    verify_resolution,
)


class ConstructionError(RuntimeError):
    """A construction produced an object that fails its own verifiers."""


def _require(report, what: str) -> None:
    if not report:
        detail = "; ".join(str(x) for x in report.violations[:4])
        raise ConstructionError(f"{what}: {report.name} failed ({detail})")


def certify_kts(system: System, order: int, rainbow: bool = False) -> System:
    d = system.design
    if d.v != order:
        raise ConstructionError(f"{system.name}: expected order {order}, built {d.v}")
    _require(verify_kts(d, system.resolution), system.name)
    if system.colouring is not None:
        _require(is_weak(d, system.colouring), system.name)
    if rainbow:
        _require(rainbow_check(d, system.resolution, system.colouring), system.name)
    return system


def certify_frame(system: System) -> System:
    _require(verify_frame(system.design, system.groups, system.resolution), system.name)
    if system.colouring is not None:
        _require(is_weak(system.design, system.colouring), system.name)
    return system


def certify_gdd(system: System, resolvable: bool = False) -> System:
    _require(verify_gdd(system.design, system.groups), system.name)
    if resolvable:
        _require(verify_resolution(system.design, system.resolution), system.name)
    return system


def certify_sts(system: System) -> System:
    _require(verify_pairwise_balance(system.design), system.name)
    return system
