"""Line-oriented catalog of known codes. Every entry is re-verified on load."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .core import Code, ContractError
from .verifier import reliability

PROVENANCE = ("native-solver", "oracle", "imported", "paper")
ENV_VAR = "SYNCCODES_CATALOG"

_LINE = re.compile(
    r"^d=(\d+) k=(\d+) n=(\d+|none) src=([\w-]+) code=([01_]+)(?: ts=(\S+))?$"
)


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    d: int
    k: int
    n: Optional[int]
    code: Code
    src: str = "native-solver"
    timestamp: Optional[str] = None

    def format(self) -> str:
        n = "none" if self.n is None else str(self.n)
        line = f"d={self.d} k={self.k} n={n} src={self.src} code={self.code}"
        if self.timestamp:
            line += f" ts={self.timestamp}"
        return line

    def check(self) -> None:
        if self.src not in PROVENANCE:
            raise CatalogError(f"unknown provenance {self.src!r}")
        if (self.code.d, self.code.k) != (self.d, self.k):
            raise CatalogError(
                f"code {self.code} has d={self.code.d} k={self.code.k}, entry says d={self.d} k={self.k}"
            )
        rel = reliability(self.code)
        if rel != self.n:
            raise CatalogError(f"code {self.code} has reliability {rel}, entry says {self.n}")

    @classmethod
    def parse(cls, line: str) -> "CatalogEntry":
        m = _LINE.match(line.strip())
        if not m:
            raise CatalogError(f"malformed catalog line: {line.strip()!r}")
        n = None if m[3] == "none" else int(m[3])
        return cls(int(m[1]), int(m[2]), n, Code.parse(m[5]), m[4], m[6])


def loads(text: str, source: str = "<catalog>") -> list[CatalogEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            entry = CatalogEntry.parse(line)
            entry.check()
        except (CatalogError, ContractError) as exc:
            raise CatalogError(f"{source}:{lineno}: {exc}") from None
        entries.append(entry)
    return entries


def dumps(entries: list[CatalogEntry]) -> str:
    return "".join(e.format() + "\n" for e in entries)


def seed_text() -> str:
    return resources.files("synccodes").joinpath("data/catalog.txt").read_text()


def default_path() -> Optional[Path]:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def load(path: Optional[os.PathLike] = None) -> list[CatalogEntry]:
    """Entries from ``path``, the $SYNCCODES_CATALOG file, or the shipped seed."""
    path = path or default_path()
    if path is None:
        return loads(seed_text(), "seed catalog")
    return loads(Path(path).read_text(), str(path))


def save(entries: list[CatalogEntry], path: os.PathLike) -> None:
    for e in entries:
        e.check()
    Path(path).write_text(dumps(entries))


def append(entry: CatalogEntry, path: os.PathLike) -> None:
    entry.check()
    path = Path(path)
    existing = path.read_text() if path.exists() else ""
    if existing and not existing.endswith("\n"):
        existing += "\n"
    path.write_text(existing + entry.format() + "\n")
