from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from latticecft.config import ModelConfig
from latticecft.reports import Report
from latticecft.suites import SUITES, Model, prepare_model

logger = logging.getLogger(__name__)


class VerificationEngine:
    def __init__(self, config: ModelConfig, *, max_workers: Optional[int] = None) -> None:
        self._config = config
        self._model: Model = prepare_model(config)
        self._max_workers = max_workers

    @property
    def model(self) -> Model:
        return self._model

    @property
    def backend_note(self) -> str:
        return self._model.backend_note

    def run(self, suites: Optional[Sequence[str]] = None) -> list[Report]:
        """Run the selected suites concurrently; reports come back in suite order."""
        names = list(suites) if suites is not None else list(self._config.suites)
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise KeyError(f"unknown suites {unknown}")
        if not names:
            return []
        workers = self._max_workers or len(names)
        logger.debug("running %d suites on %d workers", len(names), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(SUITES[name], self._model) for name in names]
            reports = [f.result() for f in futures]
        for r in reports:
            logger.info("suite %s: %d checks, %d failed", r.suite, len(r.checks), len(r.failures))
        return reports
