// Client-side re-validation with the same rule codes the server uses, so
// mistakes surface instantly and nothing the server would reject is sent.

import type { AnnotationSet, OntologyJson, Violation } from "./types.js"

const TENSES = ["past", "present", "future", "unspecified"]
const POLARITIES = ["positive", "negative"]
const MODALITIES = ["asserted", "other"]

export class OntologyIndex {
  readonly subtypeIds: Set<string>
  readonly entityTypeIds: Set<string>
  readonly slotTypes: Map<string, Set<string>> // "subtype|role" -> entity types

  constructor(readonly ontology: OntologyJson) {
    this.subtypeIds = new Set(ontology.subtypes.map((s) => s.id))
    this.entityTypeIds = new Set(ontology.entity_types.map((e) => e.id))
    this.slotTypes = new Map(
      ontology.slots.map((s) => [
        `${s.subtype}|${s.role}`,
        new Set(s.allowed_entity_types),
      ]),
    )
  }

  hasSlot(subtype: string, role: string): boolean {
    return this.slotTypes.has(`${subtype}|${role}`)
  }

  allowedEntityTypes(subtype: string, role: string): Set<string> {
    return this.slotTypes.get(`${subtype}|${role}`) ?? new Set()
  }
}

export function validateAnnotations(
  pending: AnnotationSet,
  nTokens: number,
  index: OntologyIndex,
): Violation[] {
  const out: Violation[] = []
  const push = (element: string, rule: string, message: string) =>
    out.push({ element, rule, message })

  const entityIds = new Set<string>()
  for (const e of pending.entities) {
    if (entityIds.has(e.id)) push(e.id, "duplicate-id", `entity id ${e.id} used twice`)
    entityIds.add(e.id)
    if (e.span[0] < 0 || e.span[1] < e.span[0] || e.span[1] >= nTokens) {
      push(e.id, "span-bounds", `span [${e.span}] exceeds ${nTokens} tokens`)
    }
    if (!index.entityTypeIds.has(e.type)) {
      push(e.id, "entity-type-undefined", `entity type ${e.type} not in ontology`)
    }
  }

  const triggerIds = new Set<string>()
  const triggerSubtype = new Map<string, string>()
  for (const t of pending.triggers) {
    if (triggerIds.has(t.id)) push(t.id, "duplicate-id", `trigger id ${t.id} used twice`)
    triggerIds.add(t.id)
    triggerSubtype.set(t.id, t.subtype)
    if (t.span[0] < 0 || t.span[1] < t.span[0] || t.span[1] >= nTokens) {
      push(t.id, "span-bounds", `span [${t.span}] exceeds ${nTokens} tokens`)
    }
    if (!index.subtypeIds.has(t.subtype)) {
      push(t.id, "subtype-undefined", `event subtype ${t.subtype} not in ontology`)
    }
    if (!TENSES.includes(t.tense)) push(t.id, "enum-invalid", `tense ${t.tense}`)
    if (!POLARITIES.includes(t.polarity)) push(t.id, "enum-invalid", `polarity ${t.polarity}`)
    if (!MODALITIES.includes(t.modality)) push(t.id, "enum-invalid", `modality ${t.modality}`)
  }

  const seenPairs = new Set<string>()
  const entityType = new Map(pending.entities.map((e) => [e.id, e.type]))
  for (const a of pending.arguments) {
    const element = `${a.trigger}->${a.entity}`
    if (!triggerIds.has(a.trigger)) {
      push(element, "dangling-reference", `unknown trigger ${a.trigger}`)
      continue
    }
    if (!entityIds.has(a.entity)) {
      push(element, "dangling-reference", `unknown entity ${a.entity}`)
      continue
    }
    const pair = `${a.trigger}|${a.entity}`
    if (seenPairs.has(pair)) {
      push(element, "duplicate-role", "an entity has at most one role per trigger")
      continue
    }
    seenPairs.add(pair)
    const subtype = triggerSubtype.get(a.trigger)!
    if (!index.subtypeIds.has(subtype)) continue // reported on the trigger
    if (!index.hasSlot(subtype, a.role)) {
      push(element, "slot-undefined", `role ${a.role} is not defined for ${subtype}`)
      continue
    }
    const etype = entityType.get(a.entity)!
    if (!index.allowedEntityTypes(subtype, a.role).has(etype)) {
      push(element, "entity-type-not-allowed",
           `${etype} not allowed for (${subtype}, ${a.role})`)
    }
  }

  out.sort((a, b) =>
    a.element === b.element
      ? a.rule.localeCompare(b.rule)
      : a.element.localeCompare(b.element),
  )
  return out
}
