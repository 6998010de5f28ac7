"""Run the service directly: `python -m barsmith.service`."""

from __future__ import annotations

import os

import uvicorn

from .app import create_app
from .config import AppConfig


def main() -> None:
    config_path = os.environ.get("BARSMITH_CONFIG")
    config = AppConfig.load(config_path)
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
