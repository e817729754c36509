from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from latticecft.cocycle import Coboundary, Cocycle, build_cocycle, coboundary_solve
from latticecft.errors import InconsistentSystem, NonIntegralPairing, OddNorm
from latticecft.lattice import AmbientVector, Lattice, SplitSpace, check_even, looks_discrete, recognize_lattice
from latticecft.phases import Phase
from latticecft.scalars import ScalarBackend

logger = logging.getLogger(__name__)

STAGES = ("multiplicity", "closure", "recognition", "evenness", "cocycle")

ObservedCocycle = Callable[[AmbientVector, AmbientVector], Phase]


@dataclass(frozen=True)
class Verdict:
    passed: bool
    stage: Optional[str] = None  # failing stage, None on success
    reason: str = ""
    lattice: Optional[Lattice] = None
    cocycle: Optional[Cocycle] = None
    coboundary: Optional[Coboundary] = None
    discreteness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "passed": self.passed,
            "stage": self.stage,
            "reason": self.reason,
            "discreteness": dict(self.discreteness),
        }
        if self.lattice is not None:
            out["gramIndef"] = [list(r) for r in self.lattice.gram_indef] if self.stage != "evenness" else None
        if self.cocycle is not None:
            out["cocycleTable"] = [list(r) for r in self.cocycle.table]
        if self.coboundary is not None:
            out["gaugeSize"] = len(self.coboundary.values)
        return out


def _key(backend: ScalarBackend, v: AmbientVector) -> tuple[Any, ...]:
    return tuple(backend.key(x) for x in v[0] + v[1])


def _add(a: AmbientVector, b: AmbientVector) -> AmbientVector:
    return tuple(x + y for x, y in zip(a[0], b[0])), tuple(x + y for x, y in zip(a[1], b[1]))


def _neg(a: AmbientVector) -> AmbientVector:
    return tuple(-x for x in a[0]), tuple(-x for x in a[1])


def _fail(stage: str, reason: str, **kwargs: Any) -> Verdict:
    logger.info("classification stops at %s: %s", stage, reason)
    return Verdict(passed=False, stage=stage, reason=reason, **kwargs)


def classify_charges(
    vectors: Sequence[AmbientVector],
    space: SplitSpace,
    *,
    backend: ScalarBackend,
    tolerance: Optional[float] = None,
    observed_cocycle: Optional[ObservedCocycle] = None,
    radius: int = 2,
) -> Verdict:
    """Run a charge sample (with multiplicities) through the classification pipeline."""
    b = backend
    counts = Counter(_key(b, v) for v in vectors)
    dup = next((k for k, n in counts.items() if n > 1), None)
    if dup is not None:
        return _fail("multiplicity", f"charge {[str(x) for x in dup]} appears {counts[dup]} times")

    by_key = {_key(b, v): v for v in vectors}
    zero_key = _key(b, space.zero(b))
    if zero_key not in by_key:
        return _fail("closure", "sample does not contain 0")
    for k, v in by_key.items():
        if _key(b, _neg(v)) not in by_key:
            return _fail("closure", f"sample is not closed under negation at {[str(x) for x in k]}")
    # additive closure where the sample can see it: a, b with 2a, 2b in the sample
    halves = [v for v in by_key.values() if _key(b, _add(v, v)) in by_key]
    for u in halves:
        for v in halves:
            if _key(b, _add(u, v)) not in by_key:
                return _fail("closure", f"sum of {[b.to_str(x) for x in u[0] + u[1]]} and {[b.to_str(x) for x in v[0] + v[1]]} is missing")

    tol = float(tolerance if tolerance is not None else b.tolerance)
    discrete, gap, diameter = looks_discrete(b, list(by_key.values()), tolerance=tol)
    heuristic = {"heuristic": True, "discrete": discrete, "gap": gap, "diameter": diameter}
    lattice = recognize_lattice(space, list(by_key.values()), backend=b, tolerance=tol)
    if lattice is None:
        return _fail("recognition", "sample does not look like a lattice at this scale", discreteness=heuristic)

    try:
        check_even(lattice)
    except (NonIntegralPairing, OddNorm) as exc:
        return _fail("evenness", str(exc), lattice=lattice, discreteness=heuristic)

    cocycle = build_cocycle(lattice)
    gauge = None
    if observed_cocycle is not None:
        def observed(x, y):
            return observed_cocycle(lattice.ambient(x), lattice.ambient(y))

        try:
            gauge = coboundary_solve(observed, cocycle.phase, radius, lattice.rank)
        except InconsistentSystem as exc:
            return _fail("cocycle", str(exc), lattice=lattice, cocycle=cocycle, discreteness=heuristic)
        if gauge is None:
            return _fail(
                "cocycle",
                "observed cocycle has a different commutator function",
                lattice=lattice,
                cocycle=cocycle,
                discreteness=heuristic,
            )
    logger.debug("classified a sample of %d charges as a rank-%d even lattice", len(by_key), lattice.rank)
    return Verdict(passed=True, lattice=lattice, cocycle=cocycle, coboundary=gauge, discreteness=heuristic)
