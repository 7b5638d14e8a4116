"""Command-line entry point: configuration, logging, uvicorn."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

import uvicorn

from .api import ApiConfig, create_app
from .exporting import FileOutboxTransport, SmtpTransport
from .store import open_store


@dataclass
class ServerConfig:
    listen: str = "127.0.0.1:8000"
    db_path: str = "gradelab.db"
    outbox_dir: str = "outbox"
    transport: str = "outbox"  # "outbox" | "smtp:host[:port]"
    token_ttl_hours: float = 24.0

    def api_config(self) -> ApiConfig:
        if self.transport.startswith("smtp:"):
            spec = self.transport[len("smtp:"):]
            host, _, port = spec.partition(":")
            factory = lambda _cfg: SmtpTransport(host, int(port or 25))
        else:
            factory = lambda cfg: FileOutboxTransport(cfg.outbox_dir)
        return ApiConfig(
            token_ttl_seconds=int(self.token_ttl_hours * 3600),
            outbox_dir=self.outbox_dir,
            transport_factory=factory,
        )


def parse_args(argv: list[str] | None = None) -> ServerConfig:
    env = os.environ
    parser = argparse.ArgumentParser(
        prog="gradelab-server",
        description="Rubric-based grading service (HTTP/JSON, /api/v1)",
    )
    parser.add_argument("--listen", default=env.get("GRADELAB_ADDR",
                                                    "127.0.0.1:8000"),
                        help="host:port to bind (env GRADELAB_ADDR)")
    parser.add_argument("--db", default=env.get("GRADELAB_DB", "gradelab.db"),
                        help="database file path (env GRADELAB_DB)")
    parser.add_argument("--outbox", default=env.get("GRADELAB_OUTBOX", "outbox"),
                        help="feedback outbox directory (env GRADELAB_OUTBOX)")
    parser.add_argument("--transport",
                        default=env.get("GRADELAB_TRANSPORT", "outbox"),
                        help="mail transport: 'outbox' or 'smtp:host[:port]' "
                             "(env GRADELAB_TRANSPORT)")
    parser.add_argument("--token-ttl-hours", type=float,
                        default=float(env.get("GRADELAB_TOKEN_TTL_HOURS", "24")),
                        help="session token lifetime (env GRADELAB_TOKEN_TTL_HOURS)")
    args = parser.parse_args(argv)
    return ServerConfig(listen=args.listen, db_path=args.db,
                        outbox_dir=args.outbox, transport=args.transport,
                        token_ttl_hours=args.token_ttl_hours)


def main(argv: list[str] | None = None):
    config = parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(asctime)s %(name)s %(message)s")
    store = open_store(config.db_path)
    app = create_app(store, config.api_config())
    host, _, port = config.listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000),
                log_level="warning")


if __name__ == "__main__":
    main()
