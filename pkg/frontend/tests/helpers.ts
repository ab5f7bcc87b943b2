import type { SaveResult } from "../src/api.js"
import type { SessionApi } from "../src/state.js"
import type {
  AllowedRolesResponse,
  AnnotationSet,
  DocumentPayload,
  OntologyJson,
} from "../src/types.js"

// Tiny two-subtype ontology mirroring the real shape.
export const TOY_ONTOLOGY: OntologyJson = {
  version: "test",
  entity_types: [
    { id: "person", display_name: "Person", custom: false },
    { id: "numeric", display_name: "Numeric", custom: false },
    { id: "time", display_name: "Time", custom: false },
  ],
  event_types: [{ id: "life", display_name: "Life", ordinal: 1, custom: false }],
  subtypes: [
    { id: "life.death", display_name: "Death", code: "E1-1", parent: "life", custom: false },
    { id: "life.injury", display_name: "Injury", code: "E1-2", parent: "life", custom: false },
  ],
  roles: [
    { id: "participant", display_name: "Participant", ordinal: 1, custom: false },
    { id: "time", display_name: "Time", ordinal: 4, custom: false },
    { id: "number-of-participants", display_name: "Number of Participants", ordinal: 13, custom: false },
  ],
  slots: [
    { subtype: "life.death", role: "participant", allowed_entity_types: ["person"] },
    { subtype: "life.death", role: "time", allowed_entity_types: ["time"] },
    { subtype: "life.death", role: "number-of-participants", allowed_entity_types: ["numeric"] },
    { subtype: "life.injury", role: "participant", allowed_entity_types: ["person"] },
    { subtype: "life.injury", role: "time", allowed_entity_types: ["time"] },
  ],
}

export function makeDoc(text = "storm kills 4 people today"): DocumentPayload {
  const tokens = []
  let pos = 0
  for (const w of text.split(" ")) {
    tokens.push({ s: pos, e: pos + w.length })
    pos += w.length + 1
  }
  return {
    doc_id: "p1/d1",
    project_id: "p1",
    text,
    language: "en",
    version: 0,
    status: "assigned",
    assignee: "u1",
    annotations: { tokens, entities: [], triggers: [], arguments: [] },
  }
}

/** In-memory fake backend implementing the session's API surface. */
export class FakeApi implements SessionApi {
  saved: AnnotationSet[] = []
  version = 0
  failNextWithConflict = false

  constructor(private doc: DocumentPayload) {}

  async getDocument(): Promise<DocumentPayload> {
    return { ...this.doc, version: this.version }
  }

  async getAllowedRoles(_p: string, subtype: string): Promise<AllowedRolesResponse> {
    return {
      subtype,
      slots: TOY_ONTOLOGY.slots
        .filter((s) => s.subtype === subtype)
        .map((s) => ({
          role: s.role,
          display_name: s.role,
          allowed_entity_types: s.allowed_entity_types,
        })),
    }
  }

  async saveAnnotations(
    _docId: string,
    expectedVersion: number,
    annotations: AnnotationSet,
  ): Promise<SaveResult> {
    if (this.failNextWithConflict || expectedVersion !== this.version) {
      this.failNextWithConflict = false
      return {
        kind: "conflict",
        conflict: { message: "version conflict", current_version: this.version },
      }
    }
    this.version += 1
    this.saved.push(annotations)
    this.doc.annotations = { ...this.doc.annotations, ...annotations }
    return { kind: "saved", version: this.version }
  }
}
