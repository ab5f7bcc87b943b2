import pytest

from cofee.ontology import (
    ArgumentRole,
    EventSubtype,
    EventType,
    OntologyIntegrityError,
    OntologyParseError,
    RoleSlot,
    UndefinedSlotError,
    UnknownElementError,
    load_ontology,
    parse_ontology,
    serialize_ontology,
)

PER_TYPE_SUBTYPE_COUNTS = {
    "life": 11,
    "natural-disasters": 9,
    "environment": 7,
    "crime": 16,
    "justice": 10,
    "business": 17,
    "politics": 31,
    "social": 4,
    "cyberspace": 2,
    "election": 3,
    "accident": 7,
    "science": 2,
}


def test_bundled_counts(ontology):
    assert len(ontology.event_types) == 12
    assert len(ontology.subtypes) == 119
    assert len(ontology.roles) == 21
    assert len(ontology.entity_types) == 11


def test_bundled_per_type_counts(ontology):
    counts = {}
    for s in ontology.subtypes:
        counts[s.parent] = counts.get(s.parent, 0) + 1
    assert counts == PER_TYPE_SUBTYPE_COUNTS


def test_event_type_ordinals_cover_1_to_12(ontology):
    assert sorted(t.ordinal for t in ontology.event_types) == list(range(1, 13))


def test_role_ordinals_cover_1_to_21(ontology):
    assert sorted(r.ordinal for r in ontology.roles) == list(range(1, 22))


def test_every_subtype_has_time_and_place_slots(ontology):
    for s in ontology.subtypes:
        slots = ontology.allowed_roles(s.id)
        assert slots, s.id
        roles = {slot.role for slot in slots}
        assert {"time", "place"} <= roles, s.id


def test_every_slot_allows_defined_entity_types(ontology):
    entity_ids = {e.id for e in ontology.entity_types}
    for slot in ontology.role_slots:
        assert slot.allowed_entity_types
        assert slot.allowed_entity_types <= entity_ids


def test_allowed_roles_suicide(ontology):
    roles = [s.role for s in ontology.allowed_roles("life.suicide")]
    assert roles == ["source", "time", "place", "instrument", "number-of-sources"]


def test_allowed_roles_invention(ontology):
    roles = [s.role for s in ontology.allowed_roles("science.invention")]
    assert roles == ["source", "time", "place", "artifact"]


def test_allowed_roles_unknown_subtype(ontology):
    with pytest.raises(UnknownElementError):
        ontology.allowed_roles("nosuch")


def test_allowed_roles_is_stable(ontology):
    first = ontology.allowed_roles("crime.attack")
    assert first == ontology.allowed_roles("crime.attack")


def test_allowed_entity_types_death_participant(ontology):
    assert ontology.allowed_entity_types("life.death", "participant") == {
        "person",
        "animal",
    }


def test_allowed_entity_types_earthquake_scale(ontology):
    assert ontology.allowed_entity_types(
        "natural-disasters.earthquake", "scale"
    ) == {"numeric"}


def test_allowed_entity_types_undefined_slot(ontology):
    with pytest.raises(UndefinedSlotError):
        ontology.allowed_entity_types("life.death", "price")


def test_subtype_codes_are_aliases(ontology):
    assert ontology.subtype_by_code("E4-12").id == "crime.economic-corruption"
    assert ontology.subtype_by_code("E1-11").id == "life.suicide"


def test_empty_document_rejected():
    with pytest.raises(OntologyIntegrityError, match="no event types"):
        parse_ontology("[meta]\nversion = 0\n")


def test_dangling_slot_role_named():
    text = (
        "[meta]\nversion = 0\n"
        "[entity_types]\nnumeric | Numeric | n\n"
        "[event_types]\n1 | life | Life\n"
        "[subtypes]\nE1-1 | life.death | Death\n"
        "[roles]\n1 | time | Time\n"
        "[slots]\nlife.death | scale-xx | numeric\n"
    )
    with pytest.raises(OntologyIntegrityError, match="scale-xx"):
        parse_ontology(text)


def test_duplicate_subtype_rejected():
    text = (
        "[meta]\nversion = 0\n"
        "[entity_types]\nnumeric | Numeric | n\n"
        "[event_types]\n1 | life | Life\n"
        "[subtypes]\nE1-1 | life.death | Death\nE1-2 | life.death | Death\n"
        "[roles]\n1 | time | Time\n"
        "[slots]\nlife.death | time | numeric\n"
    )
    with pytest.raises(OntologyIntegrityError, match="duplicate subtype"):
        parse_ontology(text)


def test_malformed_record_is_parse_error():
    with pytest.raises(OntologyParseError):
        parse_ontology("[meta]\nversion = 0\n[event_types]\nonly-two | fields\n")


def test_serialize_round_trip(ontology):
    text = serialize_ontology(ontology)
    again = parse_ontology(text)
    assert again == ontology
    assert serialize_ontology(again) == text


def test_extend_adds_subtype_without_mutation(ontology):
    before = serialize_ontology(ontology)
    extended = ontology.extend(EventType(id="sports", display_name="Sports", ordinal=13))
    extended = extended.extend(
        EventSubtype(id="sports.match-result", display_name="Match Result", code="E13-1")
    )
    assert len(extended.subtypes) == 120
    assert extended.subtype("sports.match-result").custom is True
    assert len(ontology.subtypes) == 119
    assert serialize_ontology(ontology) == before
    assert extended.version != ontology.version


def test_extend_adds_queryable_slot(ontology):
    extended = (
        ontology.extend(EventType(id="sports", display_name="Sports", ordinal=13))
        .extend(EventSubtype(id="sports.match-result", display_name="Match Result", code="E13-1"))
        .extend(RoleSlot(subtype="sports.match-result", role="time",
                         allowed_entity_types=frozenset({"time"})))
    )
    assert extended.allowed_entity_types("sports.match-result", "time") == {"time"}


def test_extend_duplicate_id_rejected(ontology):
    with pytest.raises(OntologyIntegrityError, match="duplicate"):
        ontology.extend(ArgumentRole(id="time", display_name="Time", ordinal=22))


def test_extend_dangling_parent_rejected(ontology):
    with pytest.raises(OntologyIntegrityError, match="nosuch"):
        ontology.extend(
            EventSubtype(id="nosuch.thing", display_name="Thing", code="E99-1")
        )


def test_extension_survives_serialization(ontology):
    extended = ontology.extend(
        ArgumentRole(id="beneficiary", display_name="Beneficiary", ordinal=22)
    )
    again = parse_ontology(serialize_ontology(extended))
    assert again.role("beneficiary").custom is True
    assert again == extended


def test_load_is_fast(ontology):
    import time

    start = time.perf_counter()
    load_ontology()
    assert time.perf_counter() - start < 1.0
