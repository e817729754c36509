from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.integrate import trapezoid

from latticecft.errors import QuadratureUnstable
from latticecft.lattice import Lattice, antichiral_pairing, chiral_pairing, indef_pairing
from latticecft.phases import Phase, turn_array
from latticecft.reports import Report, ReportBuilder
from latticecft.scalars import ScalarBackend, parse_r_squared, rational_r_squared
from latticecft.types import Charge, as_charge, charge_box

logger = logging.getLogger(__name__)

Turn = Union[Fraction, float]


@dataclass(frozen=True, order=True)
class SectorObject:
    """Irreducible sector labelled by its charge; the unit object has charge 0."""

    charge: Charge

    @classmethod
    def of(cls, *coords: int) -> "SectorObject":
        return cls(Charge(tuple(coords)))

    def conjugate(self) -> "SectorObject":
        return SectorObject(-self.charge)

    def is_unit(self) -> bool:
        return self.charge.is_zero()


def fuse(a: SectorObject, b: SectorObject) -> SectorObject:
    return SectorObject(a.charge + b.charge)


def _pi_turn(backend: ScalarBackend, x: Any) -> Turn:
    """x/2 turns, i.e. the phase e^{i pi x}."""
    q = backend.as_rational(x)
    return q / 2 if q is not None else backend.to_float(x) / 2.0


def braiding_scalar(lattice: Lattice, alpha: Charge | Sequence[int], beta: Charge | Sequence[int], sign: int) -> Phase:
    """e^{+- i pi (p alpha, p beta)} between two chiral sectors."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    value = chiral_pairing(lattice, alpha, beta)
    turn = _pi_turn(lattice.backend, value)
    return Phase(turn if sign == 1 else -turn)


def braiding_phase_2d(lattice: Lattice, alpha: Charge | Sequence[int], beta: Charge | Sequence[int]) -> Phase:
    """Chiral braiding e^{i pi (p a, p b)} times antichiral e^{-i pi (pbar a, pbar b)}."""
    b = lattice.backend
    plus = _pi_turn(b, chiral_pairing(lattice, alpha, beta))
    minus = _pi_turn(b, antichiral_pairing(lattice, alpha, beta))
    return Phase(plus) / Phase(minus)


def chiral_pairing_rank2(r_squared: Any, x: Charge | Sequence[int], y: Charge | Sequence[int]) -> Turn:
    """(p a, p b) for a = n v1 + m v2: n n' R^2/2 + m m'/(2 R^2) + (n m' + m n')/2."""
    n, m = as_charge(x).coords
    n2, m2 = as_charge(y).coords
    r2 = rational_r_squared(r_squared)
    if r2 is not None:
        return Fraction(n * n2) * r2 / 2 + Fraction(m * m2) / (2 * r2) + Fraction(n * m2 + m * n2, 2)
    f = float(parse_r_squared(r_squared))
    return n * n2 * f / 2.0 + m * m2 / (2.0 * f) + (n * m2 + m * n2) / 2.0


def verify_braiding(lattice: Lattice, radius: int) -> Report:
    """Fusion group laws and the braiding scalar identities on a coordinate box."""
    rb = ReportBuilder("braidcat")
    box = [SectorObject(c) for c in charge_box(lattice.rank, radius)]
    unit = SectorObject(Charge.zero(lattice.rank))

    witness = None
    for a in box:
        for c in box:
            if fuse(a, c) != fuse(c, a) or fuse(a, unit) != a or not fuse(a, a.conjugate()).is_unit():
                witness = {"a": list(a.charge.coords), "b": list(c.charge.coords)}
                break
        if witness:
            break
    rb.check("fusion.group", "fusion.rule", witness is None, witness=witness)

    witness = None
    for a in box:
        for c in box:
            prod = braiding_scalar(lattice, a.charge, c.charge, 1) * braiding_scalar(lattice, a.charge, c.charge, -1)
            phase = braiding_phase_2d(lattice, a.charge, c.charge)
            sign = Phase.from_sign(-1 if indef_pairing(lattice, a.charge, c.charge) % 2 else 1)
            if not prod.is_close(Phase()):
                witness = {"a": list(a.charge.coords), "b": list(c.charge.coords), "law": "inverse"}
            elif not phase.is_close(sign):
                witness = {"a": list(a.charge.coords), "b": list(c.charge.coords), "law": "2d sign", "phase": phase.describe()}
            elif not (phase * phase).is_close(Phase()):
                witness = {"a": list(a.charge.coords), "b": list(c.charge.coords), "law": "square"}
            if witness:
                break
        if witness:
            break
    rb.check("braiding.scalars", "braiding.scalar", witness is None, witness=witness)
    return rb.build()


@dataclass(frozen=True)
class FunctorData:
    object_map: Callable[[Charge], Charge]
    tensorator: Callable[[Charge, Charge], Phase]
    unit: Phase = Phase()


def canonical_functor() -> FunctorData:
    """phi(n, m) = (-n, m) with tensorator (-1)^{n m'}."""

    def object_map(x: Charge) -> Charge:
        n, m = x.coords
        return Charge((-n, m))

    def tensorator(x: Charge, y: Charge) -> Phase:
        return Phase.from_sign(-1 if (x.coords[0] * y.coords[1]) % 2 else 1)

    return FunctorData(object_map=object_map, tensorator=tensorator)


def _mismatch(left: np.ndarray, right: np.ndarray, denom: int, tolerance: float) -> np.ndarray:
    if denom:
        return np.argwhere((left - right) % denom != 0)
    d = np.mod(left - right, 1.0)
    return np.argwhere(np.minimum(d, 1.0 - d) * 2.0 * math.pi > tolerance)


def verify_functor_coherence(F: FunctorData, r_squared: Any, radius: int, *, tolerance: float = 1e-9) -> Report:
    rb = ReportBuilder("braidcat")
    r2 = rational_r_squared(r_squared)
    if r2 is not None:
        rb.note(f"R^2 = {r2} is rational: outside the irrational-R^2 hypothesis of the functor construction")
        logger.info("functor coherence at rational R^2 = %s", r2)

    small = charge_box(2, radius)
    large = charge_box(2, 2 * radius)
    where = {c: i for i, c in enumerate(large)}
    ns, nl = len(small), len(large)

    # mu(x, y), mu(x + y, z) and mu(x, y + z) as integer turns over one denominator
    phases = [F.tensorator(x, y) for x in small for y in small]
    phases += [F.tensorator(x, z) for x in large for z in small]
    phases += [F.tensorator(x, z) for x in small for z in large]
    turns, denom = turn_array(phases)
    mu_ss = turns[: ns * ns].reshape(ns, ns)
    mu_ls = turns[ns * ns : ns * ns + nl * ns].reshape(nl, ns)
    mu_sl = turns[ns * ns + nl * ns :].reshape(ns, nl)
    sums = np.array([[where[x + y] for y in small] for x in small], dtype=np.int64)

    # mu(x,y) mu(x+y,z) = mu(y,z) mu(x,y+z)
    left = mu_ss[:, :, None] + mu_ls[sums]
    right = mu_ss[None, :, :] + mu_sl[np.arange(ns)[:, None, None], sums[None, :, :]]
    bad = _mismatch(left, right, denom, tolerance)
    witness = None
    if bad.size:
        i, j, k = (int(v) for v in bad[0])
        witness = {"x": list(small[i].coords), "y": list(small[j].coords), "z": list(small[k].coords)}
    rb.check("functor.cocycle", "functor.tensorator", witness is None, witness=witness)

    zero = Charge.zero(2)
    witness = None
    if F.object_map(zero) != zero or not F.unit.is_close(Phase()):
        witness = {"objectMap(0)": list(F.object_map(zero).coords), "unit": F.unit.describe()}
    else:
        for x in small:
            if not (F.tensorator(zero, x).is_close(Phase()) and F.tensorator(x, zero).is_close(Phase())):
                witness = {"x": list(x.coords)}
                break
    rb.check("functor.unit", "functor.unit", witness is None, witness=witness)

    # mu(x,y) phi(eps+_{x,y}) = mu(y,x) eps+_{phi x, phi y}
    witness = None
    for x in small:
        for y in small:
            lhs = F.tensorator(x, y) * Phase(_half(chiral_pairing_rank2(r_squared, x, y)))
            rhs = F.tensorator(y, x) * Phase(
                _half(chiral_pairing_rank2(r_squared, F.object_map(x), F.object_map(y)))
            )
            if not lhs.is_close(rhs, tolerance):
                witness = {"x": list(x.coords), "y": list(y.coords), "lhs": lhs.describe(), "rhs": rhs.describe()}
                break
        if witness:
            break
    rb.check("functor.braided", "functor.braided", witness is None, witness=witness)

    witness = None
    for x in small:
        if F.object_map(F.object_map(x)) != x:
            witness = {"x": list(x.coords), "law": "involution"}
            break
        for y in small:
            if F.object_map(x + y) != F.object_map(x) + F.object_map(y):
                witness = {"x": list(x.coords), "y": list(y.coords), "law": "additive"}
                break
        if witness:
            break
    rb.check("functor.objects", "functor.object_map", witness is None, witness=witness)
    return rb.build()


def _half(turn: Turn) -> Turn:
    return turn / 2 if isinstance(turn, Fraction) else turn / 2.0


# Finite Fourier series: k -> c_k with f(t) = sum_k c_k e^{ikt}.
FourierSeries = Mapping[int, complex]


def _evaluate(series: FourierSeries, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=np.complex128)
    for k, c in series.items():
        out += complex(c) * np.exp(1j * int(k) * t)
    return out


def _primitive(h: FourierSeries, g: FourierSeries, t: np.ndarray) -> np.ndarray:
    """M(t) = (1/2pi) int_{-pi}^t (g - h)."""
    out = np.zeros_like(t, dtype=np.complex128)
    for k in set(h) | set(g):
        d = complex(g.get(k, 0)) - complex(h.get(k, 0))
        if k == 0 or d == 0:
            continue
        out += d * (np.exp(1j * k * t) - np.exp(-1j * k * math.pi)) / (1j * k)
    return out / (2.0 * math.pi)


def _converged(integrand: Callable[[np.ndarray], np.ndarray], *, points: int, tolerance: float, max_doublings: int) -> complex:
    prev: Optional[complex] = None
    n = int(points)
    for _ in range(max_doublings + 1):
        t = np.linspace(-math.pi, math.pi, n)
        value = complex(trapezoid(integrand(t), t))
        if prev is not None and abs(value - prev) <= tolerance:
            return value
        prev = value
        n = 2 * n - 1
    raise QuadratureUnstable(f"trapezoid estimates did not settle within {tolerance:g} after {max_doublings} doublings")


def nu_phase_check(
    h: FourierSeries,
    g: FourierSeries,
    *,
    r_squared: Any = 1,
    points: int = 512,
    tolerance: float = 1e-12,
    max_doublings: int = 6,
) -> Report:
    rb = ReportBuilder("braidcat")
    means = (complex(h.get(0, 0)), complex(g.get(0, 0)))
    ok = all(abs(m - 1.0) <= tolerance for m in means)
    rb.check("nu.mean", "functor.nu_phase", ok, witness=None if ok else {"means": [str(m) for m in means]})
    if not ok:
        return rb.build()

    def M(t: np.ndarray) -> np.ndarray:
        return _primitive(h, g, t)

    def M_prime(t: np.ndarray) -> np.ndarray:
        return (_evaluate(g, t) - _evaluate(h, t)) / (2.0 * math.pi)

    mm = _converged(lambda t: M(t) * M_prime(t), points=points, tolerance=tolerance, max_doublings=max_doublings)
    ok = abs(mm) <= tolerance
    rb.check("nu.MM_prime", "functor.nu_phase", ok, witness=None if ok else {"value": str(mm)}, detail=f"{abs(mm):.3g}")

    R = math.sqrt(float(parse_r_squared(r_squared)))
    inv, fwd = 1.0 / (R * math.sqrt(2.0)), R / math.sqrt(2.0)
    first = _converged(
        lambda t: inv * _evaluate(h, t) * (-fwd) * M(t), points=points, tolerance=tolerance, max_doublings=max_doublings
    ) / (2.0 * math.pi)
    second = _converged(
        lambda t: (-fwd) * _evaluate(h, t) * inv * M(t), points=points, tolerance=tolerance, max_doublings=max_doublings
    ) / (2.0 * math.pi)
    gap = abs(first - second)
    rb.check(
        "nu.phase_agreement",
        "functor.nu_phase",
        gap <= tolerance,
        witness=None if gap <= tolerance else {"first": str(first), "second": str(second)},
        detail=f"phase exponents {first:.6g} and {second:.6g}",
    )
    return rb.build()


def random_trig_pair(rng: np.random.Generator, degree: int = 3) -> tuple[dict[int, complex], dict[int, complex]]:
    """Two real trigonometric polynomials with mean 1."""

    def one() -> dict[int, complex]:
        out: dict[int, complex] = {0: 1.0 + 0j}
        for k in range(1, degree + 1):
            c = complex(rng.normal(), rng.normal()) / (k + 1)
            out[k] = c
            out[-k] = c.conjugate()
        return out

    return one(), one()
