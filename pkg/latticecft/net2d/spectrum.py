from __future__ import annotations

import logging
from collections import Counter
from typing import Any

import numpy as np

from latticecft.fock.partitions import colored_partition_counts, energy, state_to_json
from latticecft.fock.virasoro import sugawara
from latticecft.lattice import spin
from latticecft.net2d.extension import ExtensionSpace
from latticecft.reports import Report, ReportBuilder

logger = logging.getLogger(__name__)


def spin_spectrum(X: ExtensionSpace) -> Report:
    """Integrality of h+ - h- per sector and of L0 (x) 1 - 1 (x) L0 on the truncated space."""
    rb = ReportBuilder("net2d")
    b = X.backend
    spins: dict[str, int] = {}
    witness = None
    for lam in X.charges:
        h_plus, h_minus = X.sector(lam).minimal_bigrade
        value = b.as_integer(h_plus - h_minus)
        if value is None or value != spin(X.lattice, lam):
            witness = {"sector": list(lam.coords), "hPlus": b.to_str(h_plus), "hMinus": b.to_str(h_minus)}
            break
        spins[str(lam)] = value
    rb.check("spin.integral", "spin.integrality", witness is None, witness=witness)

    witness = None
    for lam in X.charges:
        sec = X.sector(lam)
        for module in (sec.chiral, sec.antichiral):
            L0 = sugawara(module, 0)
            for s in module.basis:
                expected = module.lowest_weight + b.from_int(energy(s))
                col = L0.column(s)
                if set(col) - {s} or not b.eq(col.get(s, b.zero), expected):
                    witness = {"sector": list(lam.coords), "side": module.side, "state": state_to_json(s)}
                    break
            if witness:
                break
        if witness:
            break
    rb.check("spin.L0_diagonal", "spin.integrality", witness is None, witness=witness)
    counts = Counter(spins.values())
    rb.note("spins: " + ", ".join(f"{k}x{v}" for k, v in sorted(counts.items())))
    return rb.build()


def character(X: ExtensionSpace, level: int) -> dict[tuple[Any, Any], int]:
    """Multiplicity of each bigrade (h+ + n+, h- + n-) with both entries <= level."""
    if level > X.cutoff:
        raise ValueError(f"level {level} exceeds the cutoff {X.cutoff}")
    b = X.backend
    table: dict[tuple[Any, Any], int] = {}
    for lam in X.charges:
        sec = X.sector(lam)
        h_plus, h_minus = sec.minimal_bigrade
        dims_plus = sec.chiral.grade_dimensions()
        dims_minus = sec.antichiral.grade_dimensions()
        for n_plus, dp in enumerate(dims_plus):
            gp = h_plus + b.from_int(n_plus)
            if b.to_float(gp) > level + b.tolerance:
                break
            for n_minus, dm in enumerate(dims_minus):
                gm = h_minus + b.from_int(n_minus)
                if b.to_float(gm) > level + b.tolerance:
                    break
                if dp and dm:
                    key = (b.key(gp), b.key(gm))
                    table[key] = table.get(key, 0) + dp * dm
    return table


def character_oracle(X: ExtensionSpace, level: int) -> dict[tuple[Any, Any], int]:
    """Same table from generating-function coefficients, without the module bases."""
    b = X.backend
    space = X.lattice.space
    p_plus = colored_partition_counts(space.d_plus, level)
    p_minus = colored_partition_counts(space.d_minus, level)
    outer = np.outer(p_plus, p_minus)
    table: dict[tuple[Any, Any], int] = {}
    for lam in X.charges:
        plus, minus = X.lattice.ambient(lam)
        h_plus = b.half * b.dot(plus, plus)
        h_minus = b.half * b.dot(minus, minus)
        for (n_plus, n_minus), count in np.ndenumerate(outer):
            if not count:
                continue
            gp = h_plus + b.from_int(n_plus)
            gm = h_minus + b.from_int(n_minus)
            if b.to_float(gp) > level + b.tolerance or b.to_float(gm) > level + b.tolerance:
                continue
            key = (b.key(gp), b.key(gm))
            table[key] = table.get(key, 0) + int(count)
    return table


def verify_character(X: ExtensionSpace, level: int) -> Report:
    rb = ReportBuilder("net2d")
    got = character(X, level)
    want = character_oracle(X, level)
    witness = None
    for key in sorted(set(got) | set(want), key=lambda k: (str(k[0]), str(k[1]))):
        if got.get(key, 0) != want.get(key, 0):
            witness = {"bigrade": [str(key[0]), str(key[1])], "table": got.get(key, 0), "oracle": want.get(key, 0)}
            break
    rb.check(
        "character.oracle",
        "character.table",
        witness is None,
        witness=witness,
        detail=f"{len(got)} bigrades up to level {level}",
    )
    return rb.build()
