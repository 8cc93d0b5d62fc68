from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from quiverflow.config import get_config
from quiverflow.logger import get_logger
from quiverflow.verify._report import CheckResult, VerifyReport
from quiverflow.verify._suites import SUITES

logger = get_logger(__name__)


def _run_suite(name: str, seed: int, quick: bool) -> list[CheckResult]:
    # one generator per suite keeps results independent of thread scheduling
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    logger.info(f"Suite {name} started.")
    try:
        items = SUITES[name](rng, quick)
    except ValueError as e:
        logger.error(f"Suite {name} aborted: {e}")
        return [CheckResult(name, "aborted", float("nan"), 0.0, False)]
    failed = sum(not item.passed for item in items)
    logger.info(f"Suite {name} finished: {len(items)} checks, {failed} failed.")
    return items


def run_suites(
    seed: int | None = None,
    names: Sequence[str] | None = None,
    quick: bool = False,
    threads: int | None = None,
) -> VerifyReport:
    """Run the named suites (all by default) and collect a sorted report."""
    config = get_config()
    seed = config.seed if seed is None else seed
    names = list(SUITES) if names is None else list(names)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        error_msg = f"Unknown suites {unknown}. Available: {', '.join(SUITES)}."
        logger.error(error_msg)
        raise ValueError(error_msg)
    threads = config.resolved_threads() if threads is None else max(1, threads)
    logger.debug(f"{names=}, {seed=}, {quick=}, {threads=}")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_run_suite, name, seed, quick) for name in names]
        items = [item for future in futures for item in future.result()]
    items.sort(key=lambda item: (item.suite, item.check))
    return VerifyReport(seed=seed, quick=quick, items=items)
