"""Text codec for truth-table files.

    n=4
    family=c2
    modulus=10011
    generator=x
    tt=0f3c

``modulus`` and ``generator`` are binary polynomial strings (``x`` is the
default generator). The payload is lowercase hex with bit v equal to f at
point v.
"""

from __future__ import annotations

import hashlib
import logging
import string
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Union

from app.errors import FunctionFileError, PolarError
from core.boolfun import TruthTable
from core.field import FieldSpec, make_field

logger = logging.getLogger(__name__)

HEADER_KEYS = ("n", "family", "modulus", "generator")
_HEX = set(string.hexdigits.lower())


@dataclass(frozen=True)
class FunctionFile:
    n: int
    family: str
    modulus: int
    generator: int
    table: TruthTable
    # sha256 of the text the file was parsed from
    source_sha256: Optional[str] = field(default=None, compare=False)

    @classmethod
    def from_table(cls, table: TruthTable, spec: FieldSpec, family: str) -> "FunctionFile":
        return cls(n=table.n, family=family, modulus=spec.modulus, generator=spec.alpha, table=table)

    @property
    def payload(self) -> str:
        return self.table.hex()

    def field_spec(self) -> FieldSpec:
        return make_field(self.n, self.modulus, self.generator)

    def digest(self) -> str:
        """Hash of the input bytes; a table that was never read hashes its canonical text."""
        if self.source_sha256 is not None:
            return self.source_sha256
        return self.canonical_digest()

    def canonical_digest(self) -> str:
        return _sha256(self.to_text())

    def header(self) -> Dict[str, str]:
        return {
            "n": str(self.n),
            "family": self.family,
            "modulus": format(self.modulus, "b"),
            "generator": "x" if self.generator == 0b10 else format(self.generator, "b"),
        }

    def to_text(self) -> str:
        lines = [f"{key}={value}" for key, value in self.header().items()]
        lines.append(f"tt={self.payload}")
        return "\n".join(lines) + "\n"


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_poly(value: str, key: str, line: int) -> int:
    if key == "generator" and value == "x":
        return 0b10
    if not value or set(value) - {"0", "1"}:
        bad = next((i for i, ch in enumerate(value) if ch not in "01"), 0)
        raise FunctionFileError(f"{key} must be a binary polynomial string", line=line, offset=len(key) + 1 + bad)
    return int(value, 2)


def parse_function_file(text: str) -> FunctionFile:
    fields: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise FunctionFileError("expected key=value", line=lineno, offset=0)
        if key not in HEADER_KEYS and key != "tt":
            raise FunctionFileError(f"unknown key '{key}'", line=lineno, offset=0)
        if key in fields:
            raise FunctionFileError(f"duplicate key '{key}'", line=lineno, offset=0)
        fields[key] = value.strip()
        lines[key] = lineno

    for key in HEADER_KEYS + ("tt",):
        if key not in fields:
            raise FunctionFileError(f"missing '{key}=' line")

    try:
        n = int(fields["n"])
    except ValueError:
        raise FunctionFileError("n must be an integer", line=lines["n"], offset=2) from None
    modulus = _parse_poly(fields["modulus"], "modulus", lines["modulus"])
    generator = _parse_poly(fields["generator"], "generator", lines["generator"])
    try:
        make_field(n, modulus, generator)
    except PolarError as exc:
        raise FunctionFileError(f"unsupported field: {exc}", line=lines["modulus"], offset=0) from None

    payload = fields["tt"]
    bad = next((i for i, ch in enumerate(payload) if ch not in _HEX), None)
    if bad is not None:
        raise FunctionFileError(f"invalid hex digit '{payload[bad]}'", line=lines["tt"], offset=3 + bad)
    expected = max(1, (1 << n) // 4)
    if len(payload) != expected:
        raise FunctionFileError(
            f"payload must have {expected} hex digits for n={n}, got {len(payload)}",
            line=lines["tt"],
            offset=3 + min(len(payload), expected),
        )
    try:
        table = TruthTable.from_hex(n, payload)
    except PolarError as exc:
        raise FunctionFileError(str(exc), line=lines["tt"], offset=3) from None
    return FunctionFile(
        n=n,
        family=fields["family"],
        modulus=modulus,
        generator=generator,
        table=table,
        source_sha256=_sha256(text),
    )


def read_function_file(path: Union[str, Path]) -> FunctionFile:
    try:
        raw = Path(path).read_bytes()
        text = raw.decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FunctionFileError(f"cannot read {path}: {exc}") from None
    return replace(parse_function_file(text), source_sha256=hashlib.sha256(raw).hexdigest())


def write_function_file(ff: FunctionFile, path: Union[str, Path]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(ff.to_text())
    except OSError as exc:
        raise FunctionFileError(f"cannot write {path}: {exc}") from None
    logger.info("Wrote %s (n=%d, family=%s)", target, ff.n, ff.family)
    return target


__all__ = [
    "FunctionFile",
    "parse_function_file",
    "read_function_file",
    "write_function_file",
]
