from __future__ import annotations

import logging
from typing import Any, Iterable, Mapping, Sequence

from latticecft.errors import OutOfWindow
from latticecft.fock.relations import Case, first_failure
from latticecft.fock.smearing import split_coefficient
from latticecft.fock.virasoro import sugawara
from latticecft.net2d.extension import ExtensionSpace
from latticecft.reports import Report, ReportBuilder
from latticecft.types import Charge, as_charge
from latticecft.vertex.bigraded import BigradedSeries, SectorField, TensorMatrix, fourier_component
from latticecft.vertex.series import pre_vertex

logger = logging.getLogger(__name__)


def full_field(X: ExtensionSpace, alpha: Charge | Sequence[int], order: int) -> BigradedSeries:
    """Y_alpha = c_alpha E-(alpha) E+(alpha) z^{alpha(0)} on every sector whose target stays in the box."""
    alpha = as_charge(alpha)
    L = X.lattice
    plus, minus = L.ambient(alpha)
    zero = X.sector(Charge.zero(L.rank))
    # the E-halves carry no zero modes, so one computation serves every sector
    chiral = pre_vertex(zero.chiral, plus, order, target=zero.chiral)
    antichiral = pre_vertex(zero.antichiral, minus, order, target=zero.antichiral)
    b = X.backend
    sectors: dict[Charge, SectorField] = {}
    for lam in X.charges:
        target = alpha + lam
        if not X.contains(target):
            continue
        src, tgt = X.sector(lam), X.sector(target)
        sectors[lam] = SectorField(
            source=lam,
            target=target,
            sign=X.cocycle(alpha, lam),
            chiral=chiral.rebind(src.chiral, tgt.chiral, b.dot(plus, src.chiral.weight)),
            antichiral=antichiral.rebind(src.antichiral, tgt.antichiral, b.dot(minus, src.antichiral.weight)),
        )
    logger.debug("full field %s on %d of %d sectors", alpha, len(sectors), len(X.charges))
    return BigradedSeries(alpha=alpha, order=int(order), sectors=sectors)


def smear_on_sector(
    X: ExtensionSpace, Y: BigradedSeries, source: Charge, coefficients: Mapping[tuple[Any, Any], Any]
) -> tuple[TensorMatrix, TensorMatrix]:
    """sum_{r,s} f_{r,s} Y_{r,s} on one source sector, split into real and imaginary parts."""
    b = X.backend
    f = Y.field_on(source)
    real = TensorMatrix(b, f.source, f.target, {})
    imag = TensorMatrix(b, f.source, f.target, {})
    for (r, s), value in sorted(coefficients.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        block = fourier_component(Y, source, r, s)
        if block.is_zero:
            continue
        m = block.matrix(b)
        re, im = split_coefficient(b, value)
        real = real + m.scaled(re)
        imag = imag + m.scaled(im)
    return real, imag


def smear_full_field(
    X: ExtensionSpace, Y: BigradedSeries, coefficients: Mapping[tuple[Any, Any], Any]
) -> dict[Charge, tuple[TensorMatrix, TensorMatrix]]:
    """Smeared field per source sector; sectors whose grid needs powers beyond the series order are left out."""
    out: dict[Charge, tuple[TensorMatrix, TensorMatrix]] = {}
    for lam in sorted(Y.sectors):
        try:
            out[lam] = smear_on_sector(X, Y, lam, coefficients)
        except OutOfWindow as exc:
            logger.debug("smearing skips sector %s: %s", lam, exc)
    return out


def verify_full_field(X: ExtensionSpace, alpha: Charge | Sequence[int], order: int) -> Report:
    rb = ReportBuilder("net2d")
    b = X.backend
    alpha = as_charge(alpha)
    Y = full_field(X, alpha, order)
    zero = Charge.zero(X.lattice.rank)

    def leading(lam: Charge) -> Case:
        block = Y.coefficient(lam, 0, 0)
        sec = X.sector(lam)
        vac = (sec.chiral.vacuum, sec.antichiral.vacuum)
        value = block.matrix(b).columns.get(vac, {}).get(vac, b.zero)
        expected = b.from_int(X.cocycle(alpha, lam))
        if block.sign != X.cocycle(alpha, lam) or not b.eq(value, expected):
            return {"value": b.to_str(value), "expected": b.to_str(expected)}, {"sector": list(lam.coords)}
        return None, {}

    witness = first_failure([leading(zero)])
    rb.check("field.vacuum_leading", "field.definition", witness is None, witness=witness)
    witness = first_failure(leading(lam) for lam in sorted(Y.sectors))
    rb.check("field.sector_sign", "field.definition", witness is None, witness=witness)

    smeared = smear_full_field(X, Y, {(0, 0): 1})

    def single(lam: Charge) -> Case:
        real, imag = smeared[lam]
        direct = fourier_component(Y, lam, 0, 0).matrix(b)
        diff = real.difference(direct) or imag.difference(TensorMatrix(b, lam, direct.target, {}))
        return diff, {"sector": list(lam.coords)}

    witness = first_failure(single(lam) for lam in sorted(smeared))
    rb.check(
        "field.smeared_single",
        "field.smearing",
        witness is None,
        witness=witness,
        detail=f"{len(smeared)} sectors inside the series window",
    )
    return rb.build()


def _is_integer(b, x) -> bool:
    return b.as_integer(x) is not None


def verify_offset_grid(X: ExtensionSpace, alpha: Charge | Sequence[int], order: int) -> Report:
    """Fourier components of Y_alpha live on r in Z - (p alpha, p lambda); L0 grades them by h - r - 1."""
    rb = ReportBuilder("net2d")
    b = X.backend
    alpha = as_charge(alpha)
    Y = full_field(X, alpha, order)
    plus, minus = X.lattice.ambient(alpha)
    differing: list[list[int]] = []

    def grading() -> Iterable[Case]:
        for lam in sorted(Y.sectors):
            f = Y.sectors[lam]
            for side, series, u in (("chiral", f.chiral, plus), ("antichiral", f.antichiral, minus)):
                h = b.half * b.dot(u, u)
                L0_src = sugawara(series.source, 0)
                L0_tgt = sugawara(series.target, 0)
                for k in range(-order, order + 1):
                    Yk = series.coefficient(k)
                    lhs = L0_tgt.compose(Yk) - Yk.compose(L0_src)
                    r = -series.offset - b.from_int(k + 1)
                    rhs = Yk.scaled(h - r - b.one)
                    yield lhs.difference(rhs), {"sector": list(lam.coords), "side": side, "power": k}

    witness = first_failure(grading())
    rb.check("field.L0_grading", "field.fourier", witness is None, witness=witness)

    def off_grid() -> Iterable[Case]:
        for lam in sorted(Y.sectors):
            f = Y.sectors[lam]
            o_plus, o_minus = f.chiral.offset, f.antichiral.offset
            if _is_integer(b, b.half * o_plus) and _is_integer(b, b.half * o_minus):
                continue
            differing.append(list(lam.coords))
            # a point of the half-offset grid that misses the derived grid on the chiral side
            r = -b.half * o_plus if not _is_integer(b, b.half * o_plus) else -b.one - o_plus
            s = -b.half * o_minus if not _is_integer(b, b.half * o_minus) else -b.one - o_minus
            try:
                block = fourier_component(Y, lam, r, s)
            except OutOfWindow:
                continue
            if not block.is_zero:
                yield {"r": b.to_str(r), "s": b.to_str(s)}, {"sector": list(lam.coords)}

    witness = first_failure(off_grid())
    rb.check("field.off_grid_zero", "field.fourier", witness is None, witness=witness)
    if differing:
        rb.note(
            f"derived grid Z - (p alpha, p lambda) and half-offset grid differ on {len(differing)} sectors, "
            f"first {differing[0]}"
        )
    else:
        rb.note("derived and half-offset Fourier grids agree on every sector")
    return rb.build()
