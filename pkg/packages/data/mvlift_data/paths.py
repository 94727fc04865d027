from __future__ import annotations

import os
from pathlib import Path

DATA_DIRECTORY_ENV = "MVLIFT_DATA_DIRECTORY"


def data_directory(subdirectory: str, override: Path | None = None) -> Path:
    """Resolve ``data/<subdirectory>``: explicit path, environment, working copy, checkout.

    A configured environment root is used as given and never falls back to the checkout.
    """
    if override is not None:
        return Path(override)
    configured_directory = os.getenv(DATA_DIRECTORY_ENV)
    if configured_directory:
        root = Path(configured_directory)
        if not root.is_dir():
            raise FileNotFoundError(f"{DATA_DIRECTORY_ENV} is set to missing directory {root}")
        return root / subdirectory
    directory = Path.cwd() / "data" / subdirectory
    if not directory.exists():
        directory = Path(__file__).resolve().parents[3] / "data" / subdirectory
    return directory
