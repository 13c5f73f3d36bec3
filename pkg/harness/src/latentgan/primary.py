"""Shell-out wrapper around the sampling toolkit's CLI."""

from __future__ import annotations

import os
import shutil
import subprocess
import sys


class PrimaryCliError(RuntimeError):
    """The sampling CLI returned a non-zero exit code."""

    def __init__(self, argv, code, stderr):
        super().__init__(f"{' '.join(argv)} failed with exit {code}: {stderr.strip()}")
        self.exit_code = code


def cli_command() -> list[str]:
    """Resolve how to invoke the sampler CLI (override with LATENTGAN_SAMPLER_CLI)."""
    override = os.environ.get("LATENTGAN_SAMPLER_CLI")
    if override:
        return override.split()
    exe = shutil.which("bosonlat")
    if exe:
        return [exe]
    return [sys.executable, "-m", "bosonlat"]


def run_cli(*args) -> str:
    argv = cli_command() + [str(a) for a in args]
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        raise PrimaryCliError(argv, proc.returncode, proc.stderr or proc.stdout)
    return proc.stdout
