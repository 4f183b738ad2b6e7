# deterministic JSON reports
# sorted keys, items sorted by key, no timestamps: equal inputs give byte-identical files
# files are written to a temp file next to the target and renamed into place

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from arithlab.core.config import settings
from arithlab.models.schemas import Report, RunConfig, SuiteItem

logger = logging.getLogger(__name__)


def fixture_digest(blobs: Sequence[bytes]) -> Optional[str]:
    """sha256 over the fixture bytes in the order given, or None without fixtures"""
    if not blobs:
        return None
    h = hashlib.sha256()
    for blob in blobs:
        h.update(hashlib.sha256(blob).digest())
    return h.hexdigest()


def build_report(command: str, config: RunConfig, items: List[SuiteItem] = (),
                 result: Optional[Dict[str, Any]] = None,
                 blobs: Sequence[bytes] = (), passed: Optional[bool] = None) -> Report:
    items = sorted(items, key=lambda item: item.key)
    if passed is None:
        passed = all(item.passed for item in items)
    return Report(
        schema_version=settings.SCHEMA_VERSION,
        artifact_version=settings.ARTIFACT_VERSION,
        command=command,
        config=config,
        fixture_digest=fixture_digest(blobs),
        passed=passed,
        items=items,
        result=result or {},
    )


def render(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def write_report(report: Report, out: Optional[str] = None) -> str:
    """
    Render and write a report; out=None prints it to stdout

    Returns:
        the rendered JSON text
    """
    text = render(report)
    if out is None:
        print(text, end="")
        return text
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.info(f"report written to {target}")
    return text
