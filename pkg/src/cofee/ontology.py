"""Event schema engine: load, validate, query, and extend the COfEE ontology.

The schema lives in a structured text file (see `data/cofee.ontology` and
the grammar in FORMAT below); nothing about the event inventory is
hard-coded here, so admins can extend or replace it at runtime.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

FORMAT = """\
Ontology file grammar (UTF-8, line oriented):
  - blank lines and lines starting with '#' are ignored
  - a line '[name]' opens a section; known sections:
      [meta]          key = value pairs; 'version' is required
      [entity_types]  id | display_name | description
      [event_types]   ordinal | id | display_name
      [subtypes]      code | id | display_name     (id is '<event_type>.<slug>')
      [roles]         ordinal | id | display_name
      [slots]         subtype | role | entity_type,entity_type,...
  - any record may carry a trailing '| custom' marker
  - ids are lowercase, hyphenated ('economic-corruption'); a subtype id is
    prefixed by its parent event type id ('crime.economic-corruption')
"""

_ID_RE = re.compile(r"^[a-z0-9]+(?:-[a-z0-9]+)*$")
_SUBTYPE_ID_RE = re.compile(r"^[a-z0-9]+(?:-[a-z0-9]+)*\.[a-z0-9]+(?:-[a-z0-9]+)*$")

_SECTIONS = ("meta", "entity_types", "event_types", "subtypes", "roles", "slots")


class OntologyError(Exception):
    """Base for schema loading/lookup failures."""


class OntologyParseError(OntologyError):
    """The document does not match the ontology file grammar."""


class OntologyIntegrityError(OntologyError):
    """A cross-reference or uniqueness rule is broken; names the element."""


class UnknownElementError(OntologyError, KeyError):
    """Lookup of an id that is not defined in the ontology."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return Exception.__str__(self)


class UndefinedSlotError(OntologyError, KeyError):
    """No role slot is defined for the requested (subtype, role) pair."""

    def __str__(self) -> str:
        return Exception.__str__(self)


@dataclass(frozen=True)
class EntityType:
    id: str
    display_name: str
    description: str = ""
    custom: bool = False


@dataclass(frozen=True)
class EventType:
    id: str
    display_name: str
    ordinal: int
    custom: bool = False


@dataclass(frozen=True)
class EventSubtype:
    id: str
    display_name: str
    code: str
    custom: bool = False

    @property
    def parent(self) -> str:
        return self.id.split(".", 1)[0]


@dataclass(frozen=True)
class ArgumentRole:
    id: str
    display_name: str
    ordinal: int
    custom: bool = False


@dataclass(frozen=True)
class RoleSlot:
    subtype: str
    role: str
    allowed_entity_types: frozenset[str]
    custom: bool = False


@dataclass(frozen=True)
class Ontology:
    """Immutable, cross-validated schema snapshot.

    Extension never mutates; `extend` returns a new value with a bumped
    version, so snapshots can be shared freely across threads.
    """

    version: str
    entity_types: tuple[EntityType, ...]
    event_types: tuple[EventType, ...]
    subtypes: tuple[EventSubtype, ...]
    roles: tuple[ArgumentRole, ...]
    role_slots: tuple[RoleSlot, ...]
    _by_id: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_integrity(self)
        index = {
            "entity": {e.id: e for e in self.entity_types},
            "event": {e.id: e for e in self.event_types},
            "subtype": {s.id: s for s in self.subtypes},
            "role": {r.id: r for r in self.roles},
            "slot": {(s.subtype, s.role): s for s in self.role_slots},
            "code": {s.code: s for s in self.subtypes if s.code},
        }
        slots_by_subtype: dict[str, list[RoleSlot]] = {s.id: [] for s in self.subtypes}
        role_ord = {r.id: r.ordinal for r in self.roles}
        for slot in self.role_slots:
            slots_by_subtype[slot.subtype].append(slot)
        for subtype_slots in slots_by_subtype.values():
            subtype_slots.sort(key=lambda s: role_ord[s.role])
        index["subtype_slots"] = {k: tuple(v) for k, v in slots_by_subtype.items()}
        object.__setattr__(self, "_by_id", index)

    # -- lookups ---------------------------------------------------------

    def entity_type(self, entity_type_id: str) -> EntityType:
        return self._lookup("entity", entity_type_id, "entity type")

    def event_type(self, event_type_id: str) -> EventType:
        return self._lookup("event", event_type_id, "event type")

    def subtype(self, subtype_id: str) -> EventSubtype:
        return self._lookup("subtype", subtype_id, "event subtype")

    def subtype_by_code(self, code: str) -> EventSubtype:
        return self._lookup("code", code, "event subtype code")

    def role(self, role_id: str) -> ArgumentRole:
        return self._lookup("role", role_id, "argument role")

    def has_subtype(self, subtype_id: str) -> bool:
        return subtype_id in self._by_id["subtype"]

    def has_slot(self, subtype_id: str, role_id: str) -> bool:
        return (subtype_id, role_id) in self._by_id["slot"]

    def allowed_roles(self, subtype_id: str) -> tuple[RoleSlot, ...]:
        """Slots defined for a subtype, ordered by role ordinal."""
        if subtype_id not in self._by_id["subtype"]:
            raise UnknownElementError(f"unknown event subtype {subtype_id!r}")
        return self._by_id["subtype_slots"][subtype_id]

    def allowed_entity_types(self, subtype_id: str, role_id: str) -> frozenset[str]:
        """Entity types an argument may have in the given (subtype, role) slot."""
        slot = self._by_id["slot"].get((subtype_id, role_id))
        if slot is None:
            raise UndefinedSlotError(
                f"no slot for role {role_id!r} on subtype {subtype_id!r}"
            )
        return slot.allowed_entity_types

    def _lookup(self, kind: str, key, label: str):
        try:
            return self._by_id[kind][key]
        except KeyError:
            raise UnknownElementError(f"unknown {label} {key!r}") from None

    # -- extension -------------------------------------------------------

    def extend(
        self, addition: EntityType | EventType | EventSubtype | ArgumentRole | RoleSlot
    ) -> "Ontology":
        """Return a new ontology with `addition` appended and flagged custom.

        The receiver is left untouched; duplicate ids and dangling
        references raise OntologyIntegrityError.
        """
        marked = _with_custom(addition)
        fields = {
            "version": _bump_version(self.version),
            "entity_types": self.entity_types,
            "event_types": self.event_types,
            "subtypes": self.subtypes,
            "roles": self.roles,
            "role_slots": self.role_slots,
        }
        key = {
            EntityType: "entity_types",
            EventType: "event_types",
            EventSubtype: "subtypes",
            ArgumentRole: "roles",
            RoleSlot: "role_slots",
        }[type(marked)]
        fields[key] = fields[key] + (marked,)
        return Ontology(**fields)


def _with_custom(element):
    cls = type(element)
    values = {f: getattr(element, f) for f in element.__dataclass_fields__}
    values["custom"] = True
    return cls(**values)


def _bump_version(version: str) -> str:
    m = re.match(r"^(.*)-ext(\d+)$", version)
    if m:
        return f"{m.group(1)}-ext{int(m.group(2)) + 1}"
    return f"{version}-ext1"


# -- integrity ------------------------------------------------------------


def _check_id(kind: str, value: str) -> None:
    pattern = _SUBTYPE_ID_RE if kind == "subtype" else _ID_RE
    if not pattern.match(value):
        raise OntologyIntegrityError(f"malformed {kind} id {value!r}")


def _check_unique(kind: str, ids) -> None:
    seen = set()
    for i in ids:
        if i in seen:
            raise OntologyIntegrityError(f"duplicate {kind} id {i!r}")
        seen.add(i)


def _check_integrity(o: Ontology) -> None:
    if not o.event_types:
        raise OntologyIntegrityError("no event types defined")
    for e in o.entity_types:
        _check_id("entity type", e.id)
    for t in o.event_types:
        _check_id("event type", t.id)
        if t.ordinal < 1:
            raise OntologyIntegrityError(f"event type {t.id!r} has ordinal < 1")
    for s in o.subtypes:
        _check_id("subtype", s.id)
    for r in o.roles:
        _check_id("role", r.id)
        if r.ordinal < 1:
            raise OntologyIntegrityError(f"role {r.id!r} has ordinal < 1")
    _check_unique("entity type", (e.id for e in o.entity_types))
    _check_unique("event type", (t.id for t in o.event_types))
    _check_unique("subtype", (s.id for s in o.subtypes))
    _check_unique("role", (r.id for r in o.roles))
    _check_unique("event type ordinal", (t.ordinal for t in o.event_types))
    _check_unique("role ordinal", (r.ordinal for r in o.roles))

    event_ids = {t.id for t in o.event_types}
    entity_ids = {e.id for e in o.entity_types}
    subtype_ids = {s.id for s in o.subtypes}
    role_ids = {r.id for r in o.roles}
    for s in o.subtypes:
        if s.parent not in event_ids:
            raise OntologyIntegrityError(
                f"subtype {s.id!r} references undefined event type {s.parent!r}"
            )
    seen_slots = set()
    for slot in o.role_slots:
        if slot.subtype not in subtype_ids:
            raise OntologyIntegrityError(
                f"slot references undefined subtype {slot.subtype!r}"
            )
        if slot.role not in role_ids:
            raise OntologyIntegrityError(
                f"slot on {slot.subtype!r} references undefined role {slot.role!r}"
            )
        if not slot.allowed_entity_types:
            raise OntologyIntegrityError(
                f"slot ({slot.subtype!r}, {slot.role!r}) allows no entity types"
            )
        for et in slot.allowed_entity_types:
            if et not in entity_ids:
                raise OntologyIntegrityError(
                    f"slot ({slot.subtype!r}, {slot.role!r}) references "
                    f"undefined entity type {et!r}"
                )
        key = (slot.subtype, slot.role)
        if key in seen_slots:
            raise OntologyIntegrityError(f"duplicate slot {key!r}")
        seen_slots.add(key)


# -- parsing / serialization ----------------------------------------------


def parse_ontology(text: str) -> Ontology:
    """Parse an ontology document; raises on grammar or integrity faults."""
    meta: dict[str, str] = {}
    rows: dict[str, list[tuple[list[str], bool, int]]] = {
        s: [] for s in _SECTIONS if s != "meta"
    }
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise OntologyParseError(f"line {lineno}: unknown section [{section}]")
            continue
        if section is None:
            raise OntologyParseError(f"line {lineno}: record outside any section")
        if section == "meta":
            if "=" not in line:
                raise OntologyParseError(f"line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            meta[key.strip()] = value.strip()
            continue
        parts = [p.strip() for p in line.split("|")]
        custom = False
        if parts and parts[-1] == "custom":
            custom = True
            parts = parts[:-1]
        rows[section].append((parts, custom, lineno))

    def expect(parts: list[str], n: int, lineno: int, shape: str) -> list[str]:
        if len(parts) != n:
            raise OntologyParseError(f"line {lineno}: expected '{shape}'")
        return parts

    entity_types = tuple(
        EntityType(p[0], p[1], p[2], custom)
        for p, custom, ln in (
            (expect(p, 3, ln, "id | display_name | description"), c, ln)
            for p, c, ln in rows["entity_types"]
        )
    )
    event_types = []
    for parts, custom, lineno in rows["event_types"]:
        ordinal, eid, name = expect(parts, 3, lineno, "ordinal | id | display_name")
        event_types.append(EventType(eid, name, _int(ordinal, lineno), custom))
    subtypes = []
    for parts, custom, lineno in rows["subtypes"]:
        code, sid, name = expect(parts, 3, lineno, "code | id | display_name")
        subtypes.append(EventSubtype(sid, name, code, custom))
    roles = []
    for parts, custom, lineno in rows["roles"]:
        ordinal, rid, name = expect(parts, 3, lineno, "ordinal | id | display_name")
        roles.append(ArgumentRole(rid, name, _int(ordinal, lineno), custom))
    slots = []
    for parts, custom, lineno in rows["slots"]:
        sid, rid, types = expect(parts, 3, lineno, "subtype | role | entity_types")
        allowed = frozenset(t.strip() for t in types.split(",") if t.strip())
        slots.append(RoleSlot(sid, rid, allowed, custom))

    version = meta.get("version")
    if not version:
        raise OntologyParseError("missing 'version' in [meta]")
    return Ontology(
        version=version,
        entity_types=entity_types,
        event_types=tuple(event_types),
        subtypes=tuple(subtypes),
        roles=tuple(roles),
        role_slots=tuple(slots),
    )


def _int(value: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise OntologyParseError(f"line {lineno}: expected integer, got {value!r}") from None


def serialize_ontology(o: Ontology) -> str:
    """Render an ontology back to the file format.

    The output is canonical (stable ordering, stable spacing), so two
    structurally equal ontologies serialize byte-identically.
    """
    out = ["# COfEE ontology document", "", "[meta]", f"version = {o.version}", ""]

    def mark(custom: bool) -> str:
        return " | custom" if custom else ""

    out.append("[entity_types]")
    for e in o.entity_types:
        out.append(f"{e.id} | {e.display_name} | {e.description}{mark(e.custom)}")
    out += ["", "[event_types]"]
    for t in o.event_types:
        out.append(f"{t.ordinal} | {t.id} | {t.display_name}{mark(t.custom)}")
    out += ["", "[subtypes]"]
    for s in o.subtypes:
        out.append(f"{s.code} | {s.id} | {s.display_name}{mark(s.custom)}")
    out += ["", "[roles]"]
    for r in o.roles:
        out.append(f"{r.ordinal} | {r.id} | {r.display_name}{mark(r.custom)}")
    out += ["", "[slots]"]
    for slot in o.role_slots:
        types = ",".join(sorted(slot.allowed_entity_types))
        out.append(f"{slot.subtype} | {slot.role} | {types}{mark(slot.custom)}")
    out.append("")
    return "\n".join(out)


def bundled_ontology_path() -> Path:
    return Path(resources.files("cofee").joinpath("data/cofee.ontology"))  # type: ignore[arg-type]


def load_ontology(source: str | Path | None = None) -> Ontology:
    """Load an ontology document from a path; the bundled one by default."""
    path = Path(source) if source is not None else bundled_ontology_path()
    return parse_ontology(path.read_text(encoding="utf-8"))
