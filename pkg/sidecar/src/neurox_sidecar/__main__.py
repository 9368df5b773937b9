"""Run the sidecar: ``python -m neurox_sidecar`` or ``neurox-sidecar``.

Port via SIDECAR_PORT (default 8008); backend via SIDECAR_BACKEND
(``transformers`` or ``stub``); model names via SIDECAR_*_MODEL.
"""

from __future__ import annotations

import uvicorn

from .app import create_app
from .config import Settings


def main() -> None:
    settings = Settings.from_env()
    uvicorn.run(create_app(settings), host="0.0.0.0", port=settings.port,
                limit_concurrency=settings.queue_depth)


if __name__ == "__main__":
    main()
