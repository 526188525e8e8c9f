"""Experiment report assembly and serialization."""
import json
import platform

import numpy as np

from ._backend import have_numba, select_backend
from .errors import InvalidParameters, IoFailure

SCHEMA = "unital-forge/1"

# field order is part of the format contract, not a cosmetic choice
REPORT_FIELDS = ("schema", "experiment", "params", "checks", "fingerprint")
CHECK_FIELDS = ("name", "status", "witness", "elapsed_ms")
STATUSES = ("pass", "fail", "inapplicable")


def toolchain_fingerprint(threads: int = 1, cache_used: bool = False) -> dict:
    """Runtime provenance: versions, backend, pool size, cache state."""
    numba_version = None
    if have_numba():
        import numba
        numba_version = numba.__version__
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "numba": numba_version,
        "backend": select_backend(),
        "threads": int(threads),
        "cache_used": bool(cache_used),
    }


def make_check(name: str, status: str, witness, elapsed_ms: int) -> dict:
    if status not in STATUSES:
        raise InvalidParameters(f"unknown check status {status!r}")
    return {"name": name, "status": status, "witness": witness,
            "elapsed_ms": int(elapsed_ms)}


def make_report(experiment: str, params: dict, checks: list,
                threads: int = 1, cache_used: bool = False) -> dict:
    return {
        "schema": SCHEMA,
        "experiment": experiment,
        "params": {k: params[k] for k in sorted(params)},
        "checks": [{f: c[f] for f in CHECK_FIELDS} for c in checks],
        "fingerprint": toolchain_fingerprint(threads, cache_used),
    }


def all_passed(report: dict) -> bool:
    """True when no check failed; inapplicable checks do not count."""
    return all(c["status"] != "fail" for c in report["checks"])


def _jsonable(v):
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(f"not JSON serializable: {type(v).__name__}")


def canonical_json(report: dict, keep_volatile: bool = True) -> str:
    """Fixed-order JSON; the volatile fields can be dropped for comparison.

    Timing and environment vary run to run, so determinism statements are
    made about the rendering with keep_volatile=False: no elapsed_ms, no
    fingerprint.
    """
    out = {}
    for key in REPORT_FIELDS:
        if key == "fingerprint" and not keep_volatile:
            continue
        v = report[key]
        if key == "checks":
            fields = [f for f in CHECK_FIELDS
                      if keep_volatile or f != "elapsed_ms"]
            v = [{f: c[f] for f in fields} for c in v]
        out[key] = v
    return json.dumps(out, indent=2, sort_keys=False, default=_jsonable)


def render_text(report: dict) -> str:
    """One headline, one line per check."""
    lines = [
        f"experiment: {report['experiment']}",
        "params: " + " ".join(
            f"{k}={v}" for k, v in report["params"].items()),
    ]
    for c in report["checks"]:
        tag = {"pass": "PASS", "fail": "FAIL",
               "inapplicable": "INAPPLICABLE"}[c["status"]]
        lines.append(f"{tag:<12} {c['name']}  witness={c['witness']!r}"
                     f"  ({c['elapsed_ms']} ms)")
    verdict = "all passed" if all_passed(report) else "FAILURES PRESENT"
    lines.append(f"result: {verdict}")
    return "\n".join(lines) + "\n"


def report_write(report: dict, format: str, out: str | None = None) -> str:
    """Render a report and optionally persist it; returns the rendering."""
    if format == "json":
        text = canonical_json(report) + "\n"
    elif format == "text":
        text = render_text(report)
    else:
        raise InvalidParameters(f"unknown report format {format!r}")
    if out is not None:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoFailure(out, str(exc))
    return text
