"""Minimal reader for the workbench ontology file format.

This package talks to the annotation workbench only through its external
surfaces; the ontology document (sections [subtypes], [roles], [slots],
pipe-separated records) is one of them. We read just what the model needs:
the ordered subtype list, the ordered role list, and the slot table.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Schema:
    subtypes: tuple[str, ...]          # ontology order
    roles: tuple[str, ...]             # ordinal order
    slots: frozenset[tuple[str, str]]  # (subtype, role)
    slot_entity_types: dict[tuple[str, str], frozenset[str]]

    def has_slot(self, subtype: str, role: str) -> bool:
        return (subtype, role) in self.slots


def parse_schema(text: str) -> Schema:
    section = None
    subtypes: list[str] = []
    roles: list[tuple[int, str]] = []
    slots: dict[tuple[str, str], frozenset[str]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            continue
        parts = [p.strip() for p in line.split("|")]
        if parts and parts[-1] == "custom":
            parts = parts[:-1]
        if section == "subtypes":
            subtypes.append(parts[1])
        elif section == "roles":
            roles.append((int(parts[0]), parts[1]))
        elif section == "slots":
            types = frozenset(t.strip() for t in parts[2].split(",") if t.strip())
            slots[(parts[0], parts[1])] = types
    roles.sort()
    return Schema(
        subtypes=tuple(subtypes),
        roles=tuple(r for _, r in roles),
        slots=frozenset(slots),
        slot_entity_types=slots,
    )


def load_schema(path: str | Path) -> Schema:
    return parse_schema(Path(path).read_text(encoding="utf-8"))


def bundled_schema_path() -> Path:
    """Locate the workbench's bundled ontology file via its CLI."""
    out = subprocess.run(
        ["cofee", "ontology"], check=True, capture_output=True, text=True
    ).stdout
    for line in out.splitlines():
        if line.startswith("(bundled file:"):
            return Path(line.split(":", 1)[1].strip().rstrip(")"))
    raise RuntimeError("could not locate the bundled ontology file")
