from __future__ import annotations

import pytest

from latticecft.reports import ANCHORS, ReportBuilder


def test_unknown_anchor_is_rejected():
    rb = ReportBuilder("lattice")
    with pytest.raises(ValueError, match="lattice.grm"):
        rb.check("lattice.even", "lattice.grm", True)
    with pytest.raises(ValueError, match="unknown anchor"):
        rb.skip("lattice.even", "no.such.anchor")
    assert rb.build().checks == ()


def test_known_anchor_records_check():
    assert "lattice.gram" in ANCHORS
    rb = ReportBuilder("lattice")
    assert not rb.check("lattice.even", "lattice.gram", False)
    rb.skip("lattice.recognized", "lattice.recognition", detail="nothing to match")
    report = rb.build()
    assert [c.status for c in report.checks] == ["fail", "skipped"]
    assert report.checks[0].witness == {"reason": "no witness recorded"}
