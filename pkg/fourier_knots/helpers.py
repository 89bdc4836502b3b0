"""Small file and naming helpers shared by the library and the CLI.

Nothing here touches numerics; every function is safe to import anywhere.
"""

import logging
import os
import re
from pathlib import Path

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Atomic output
# ---------------------------------------------------------------------------

def atomic_write_bytes(path: Path, data: bytes) -> None:
    """Atomic write: .tmp + fsync + rename.

    Readers never observe a half-written file; a failed write leaves any
    previous file untouched.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        with open(tmp, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            tmp.unlink()
        except FileNotFoundError:
            pass
        raise
    logger.debug(f"wrote {len(data)} bytes to {path}")


def atomic_write_text(path: Path, text: str) -> None:
    # Always "\n" line endings and UTF-8 so outputs are byte-identical across platforms.
    atomic_write_bytes(path, text.encode("utf-8"))


# ---------------------------------------------------------------------------
# Names
# ---------------------------------------------------------------------------

_SLUG_RE = re.compile(r"[^A-Za-z0-9._-]+")


def slugify(name: str) -> str:
    """File-system safe stem for a knot name: ``torus(2,3)`` -> ``torus-2-3``."""
    slug = _SLUG_RE.sub("-", name).strip("-.")
    return slug or "knot"
