"""Run manifests: config hash, seed and checksums of every emitted file."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    config_sha256: str
    seed: int
    tool_version: str
    outputs: dict
    timing_s: float

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_manifest(subcommand, config_sha256, seed, output_paths, timing_s) -> RunManifest:
    outputs = {Path(p).name: file_sha256(p) for p in output_paths}
    return RunManifest(
        subcommand=subcommand,
        config_sha256=config_sha256,
        seed=seed,
        tool_version=__version__,
        outputs=outputs,
        timing_s=timing_s,
    )
