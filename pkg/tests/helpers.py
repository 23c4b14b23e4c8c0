import hashlib
from pathlib import Path

VOLATILE = {"timings.json"}


def tree_digest(root) -> dict:
    """sha256 of every output file except wall-clock timings."""
    root = Path(root)
    return {str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.rglob("*")) if p.is_file() and p.name not in VOLATILE}
