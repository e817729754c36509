from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence

from latticecft.errors import BackendMismatch, OutOfWindow
from latticecft.fock.module import FockModule
from latticecft.fock.modes import as_mode_vector, mode_operator
from latticecft.fock.operators import GradedOperator, scalar_operator
from latticecft.fock.partitions import energy, state_to_json
from latticecft.fock.relations import first_failure
from latticecft.reports import Report, ReportBuilder
from latticecft.scalars import Scalar, ScalarBackend

# Fourier coefficient f_m of a band-limited test function.
Coefficient = Any


def split_coefficient(backend: ScalarBackend, value: Coefficient) -> tuple[Scalar, Scalar]:
    """(real, imag) parts of a Fourier coefficient: a number, a complex or a (re, im) pair."""
    if isinstance(value, tuple):
        re, im = value
    elif isinstance(value, complex):
        re, im = value.real, value.imag
    else:
        re, im = value, 0
    return _part(backend, re), _part(backend, im)


def _part(backend: ScalarBackend, x: Any) -> Scalar:
    if isinstance(x, float) and backend.is_exact:
        if not x.is_integer():
            raise BackendMismatch(f"coefficient part {x!r} is not exact; pass a Fraction")
        x = int(x)
    return backend.convert(x)


@dataclass(frozen=True)
class SmearedField:
    """alpha(f) = real + i * imag, both parts sums of mode operators with real coefficients."""

    real: GradedOperator
    imag: GradedOperator
    support: tuple[int, ...]

    def commutator(self, other: "SmearedField") -> tuple[GradedOperator, GradedOperator]:
        re = self.real.commutator(other.real) - self.imag.commutator(other.imag)
        im = self.real.commutator(other.imag) + self.imag.commutator(other.real)
        return re, im


def _mode_sum(module: FockModule, alpha: Sequence[Scalar], parts: Mapping[int, Scalar]) -> GradedOperator:
    """sum_m c_m alpha(m)."""
    b = module.backend
    total: Optional[GradedOperator] = None
    for m in sorted(parts):
        term = mode_operator(module, alpha, m).scaled(parts[m])
        total = term if total is None else total + term
    if total is None:
        return scalar_operator(module, b.zero)
    return total


def smear_field(module: FockModule, alpha: Sequence[Any], coefficients: Mapping[int, Coefficient]) -> SmearedField:
    E = module.cutoff
    outside = [m for m in coefficients if abs(int(m)) > E]
    if outside:
        raise OutOfWindow(f"Fourier support {sorted(outside)} exceeds the cutoff {E}")
    b = module.backend
    vec = as_mode_vector(module, alpha)
    re_parts: dict[int, Scalar] = {}
    im_parts: dict[int, Scalar] = {}
    for m, value in coefficients.items():
        re, im = split_coefficient(b, value)
        if not b.is_zero(re):
            re_parts[int(m)] = re
        if not b.is_zero(im):
            im_parts[int(m)] = im
    return SmearedField(
        real=_mode_sum(module, vec, re_parts),
        imag=_mode_sum(module, vec, im_parts),
        support=tuple(sorted(int(m) for m in coefficients)),
    )


def smeared_commutator_value(
    module: FockModule,
    alpha: Sequence[Any],
    beta: Sequence[Any],
    f: Mapping[int, Coefficient],
    g: Mapping[int, Coefficient],
) -> tuple[Scalar, Scalar]:
    """(alpha, beta) * sum_m m f_m g_{-m}, split into real and imaginary parts."""
    b = module.backend
    pair = b.dot(as_mode_vector(module, alpha), as_mode_vector(module, beta))
    re_total, im_total = b.zero, b.zero
    for m, fm in f.items():
        gm = g.get(-m)
        if gm is None or m == 0:
            continue
        fr, fi = split_coefficient(b, fm)
        gr, gi = split_coefficient(b, gm)
        k = b.from_int(m)
        re_total = re_total + k * (fr * gr - fi * gi)
        im_total = im_total + k * (fr * gi + fi * gr)
    return pair * re_total, pair * im_total


def verify_smeared_commutator(
    module: FockModule,
    alpha: Sequence[Any],
    beta: Sequence[Any],
    f: Mapping[int, Coefficient],
    g: Mapping[int, Coefficient],
) -> Report:
    rb = ReportBuilder("fock")
    b = module.backend
    re, im = smear_field(module, alpha, f).commutator(smear_field(module, beta, g))
    want_re, want_im = smeared_commutator_value(module, alpha, beta, f, g)
    witness = first_failure(
        [
            (re.difference(scalar_operator(module, want_re)), {"part": "real"}),
            (im.difference(scalar_operator(module, want_im)), {"part": "imag"}),
        ]
    )
    rb.check(
        "smearing.commutator",
        "smearing.commutator",
        witness is None,
        witness=witness,
        detail=f"mode sum = {b.to_str(want_re)} + i*{b.to_str(want_im)} on {re.window_size()} states",
    )
    rb.note("smeared commutator uses the mode sum sum_m m f_m g_-m; the integral display differs from it by a factor i")
    return rb.build()


@dataclass(frozen=True)
class EnergyBoundResult:
    max_ratio: float
    alpha_norm: float
    worst_state: Optional[list[list[int]]]
    states: int

    @property
    def holds(self) -> bool:
        return self.max_ratio <= self.alpha_norm * (1.0 + 1e-12)


def energy_bound_ratios(module: FockModule, alpha: Sequence[Any], m: int) -> EnergyBoundResult:
    """max over the safe window of |alpha(m) psi| / ((|m|+1) |(L0+1) psi|)."""
    b = module.backend
    vec = as_mode_vector(module, alpha)
    op = mode_operator(module, vec, m)
    h = b.to_float(module.lowest_weight)
    best, worst = 0.0, None
    for s in module.states_up_to(op.window):
        image = op.column(s)
        num = math.sqrt(max(0.0, b.to_float(module.inner(image, image)))) if image else 0.0
        psi_norm = math.sqrt(float(module.pairing(s, s)))
        den = (abs(m) + 1) * (h + energy(s) + 1.0) * psi_norm
        ratio = num / den
        if ratio > best:
            best, worst = ratio, state_to_json(s)
    alpha_norm = math.sqrt(max(0.0, b.to_float(b.dot(vec, vec))))
    return EnergyBoundResult(max_ratio=best, alpha_norm=alpha_norm, worst_state=worst, states=len(module.states_up_to(op.window)))
