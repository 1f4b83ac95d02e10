"""Collects one verdict line per acceptance criterion."""

import time

_results: dict = {}


def record(number: int, ok: bool, detail: str, started: float) -> None:
    took = time.perf_counter() - started
    verdict = "PASS" if ok else "FAIL"
    line = f"criterion {number:2d}: {verdict}  ({took:.1f}s) {detail}"
    _results[number] = line
    print(line)


def lines() -> list:
    return [_results[k] for k in sorted(_results)]
