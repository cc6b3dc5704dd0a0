"""Run manifests: reproducibility sidecars for every numeric output file."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import __version__


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class RunManifest:
    """What produced an output file: command, parameters, seeds, tool
    version, and content hashes of the inputs.  Contains no timestamps, so
    re-running the same invocation reproduces the sidecar byte for byte."""

    command: str
    parameters: dict
    seeds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outcome: dict = field(default_factory=dict)
    version: str = __version__

    def add_input(self, name, path):
        self.inputs[str(name)] = {"path": str(path), "sha256": _digest(path)}

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outcome": self.outcome,
            "version": self.version,
        }

    def write_sidecar(self, output_path):
        side = f"{output_path}.manifest.json"
        with open(side, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return side
