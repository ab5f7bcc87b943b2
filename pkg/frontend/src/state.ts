// Annotation session state machine: selection, pending edits, save flow.
// DOM-free so the whole workflow is unit-testable; rendering subscribes to
// this object and redraws.

import type { SaveResult } from "./api.js"
import type {
  AllowedRolesResponse,
  AnnotationSet,
  DocumentPayload,
  EntityMention,
  Modality,
  Polarity,
  RoleSlot,
  Tense,
  TriggerMention,
  Violation,
} from "./types.js"
import { OntologyIndex, validateAnnotations } from "./validate.js"

export type Panel = "entity" | "trigger" | "argument"

export interface Selection {
  start: number
  end: number
}

export interface ConflictState {
  currentVersion: number
  message: string
}

export type LinkOutcome =
  | { kind: "linked" }
  | { kind: "needs-confirm"; existingRole: string }
  | { kind: "rejected"; reason: string }

/** What the session needs from the backend; ApiClient satisfies this. */
export interface SessionApi {
  getDocument(docId: string): Promise<DocumentPayload>
  getAllowedRoles(projectId: string, subtype: string): Promise<AllowedRolesResponse>
  saveAnnotations(
    docId: string,
    expectedVersion: number,
    annotations: AnnotationSet,
  ): Promise<SaveResult>
}

function spansOverlap(a: [number, number], b: [number, number]): boolean {
  return a[0] <= b[1] && b[0] <= a[1]
}

export class AnnotationSession {
  pending: AnnotationSet
  serverVersion: number
  selection: Selection | null = null
  activePanel: Panel = "entity"
  violations: Violation[] = []
  warnings: string[] = []
  conflict: ConflictState | null = null
  /** role slots per subtype, exactly as the API returned them */
  roleOptions = new Map<string, RoleSlot[]>()
  private idCounter = 0

  constructor(
    private api: SessionApi,
    public doc: DocumentPayload,
    public index: OntologyIndex,
  ) {
    this.pending = {
      entities: [...(doc.annotations.entities ?? [])],
      triggers: [...(doc.annotations.triggers ?? [])],
      arguments: [...(doc.annotations.arguments ?? [])],
    }
    this.serverVersion = doc.version
  }

  get nTokens(): number {
    return this.doc.annotations.tokens?.length ?? 0
  }

  tokenText(i: number): string {
    const t = this.doc.annotations.tokens![i]
    return this.doc.text.slice(t.s, t.e)
  }

  spanText(span: [number, number]): string {
    const tokens = this.doc.annotations.tokens!
    return this.doc.text.slice(tokens[span[0]].s, tokens[span[1]].e)
  }

  private freshId(prefix: string): string {
    const taken = new Set([
      ...this.pending.entities.map((e) => e.id),
      ...this.pending.triggers.map((t) => t.id),
    ])
    let id
    do {
      id = `${prefix}${this.idCounter++}`
    } while (taken.has(id))
    return id
  }

  // -- selection ------------------------------------------------------------

  select(start: number, end: number): boolean {
    if (start < 0 || end < start || end >= this.nTokens) {
      return false // selections across the sentence end are blocked
    }
    this.selection = { start, end }
    return true
  }

  clearSelection(): void {
    this.selection = null
  }

  setPanel(panel: Panel): void {
    this.activePanel = panel
  }

  // -- pending edits ----------------------------------------------------------

  tagEntity(entityType: string): EntityMention | null {
    if (!this.selection) return null // empty selection is a no-op
    const span: [number, number] = [this.selection.start, this.selection.end]
    for (const e of this.pending.entities) {
      if (spansOverlap(e.span, span)) {
        this.warnings.push(`selection overlaps entity ${e.id} (${e.surface})`)
        break
      }
    }
    const mention: EntityMention = {
      id: this.freshId("e"),
      span,
      type: entityType,
      surface: this.spanText(span),
    }
    this.pending.entities.push(mention)
    this.clearSelection()
    return mention
  }

  tagTrigger(
    subtype: string,
    tense: Tense = "unspecified",
    polarity: Polarity = "positive",
    modality: Modality = "asserted",
  ): TriggerMention | { error: string } {
    if (!this.selection) return { error: "no selection" }
    const span: [number, number] = [this.selection.start, this.selection.end]
    for (const t of this.pending.triggers) {
      if (spansOverlap(t.span, span)) {
        return { error: `overlaps trigger ${t.id} (${this.spanText(t.span)})` }
      }
    }
    const mention: TriggerMention = {
      id: this.freshId("t"),
      span,
      subtype,
      tense,
      polarity,
      modality,
    }
    this.pending.triggers.push(mention)
    this.clearSelection()
    return mention
  }

  /** Slots for the role drop-down; always the API's answer, cached verbatim. */
  async loadRoleOptions(subtype: string): Promise<RoleSlot[]> {
    const cached = this.roleOptions.get(subtype)
    if (cached) return cached
    const response = await this.api.getAllowedRoles(this.doc.project_id, subtype)
    this.roleOptions.set(subtype, response.slots)
    return response.slots
  }

  linkArgument(triggerId: string, entityId: string, role: string): LinkOutcome {
    const trigger = this.pending.triggers.find((t) => t.id === triggerId)
    const entity = this.pending.entities.find((e) => e.id === entityId)
    if (!trigger || !entity) {
      return { kind: "rejected", reason: "unknown trigger or entity" }
    }
    const options = this.roleOptions.get(trigger.subtype)
    if (options && !options.some((s) => s.role === role)) {
      return { kind: "rejected", reason: `role ${role} not allowed for ${trigger.subtype}` }
    }
    const existing = this.pending.arguments.find(
      (a) => a.trigger === triggerId && a.entity === entityId,
    )
    if (existing) {
      return { kind: "needs-confirm", existingRole: existing.role }
    }
    this.pending.arguments.push({ trigger: triggerId, entity: entityId, role })
    return { kind: "linked" }
  }

  replaceArgument(triggerId: string, entityId: string, role: string): void {
    this.pending.arguments = this.pending.arguments.filter(
      (a) => !(a.trigger === triggerId && a.entity === entityId),
    )
    this.pending.arguments.push({ trigger: triggerId, entity: entityId, role })
  }

  removeEntity(entityId: string): void {
    this.pending.entities = this.pending.entities.filter((e) => e.id !== entityId)
    this.pending.arguments = this.pending.arguments.filter((a) => a.entity !== entityId)
  }

  removeTrigger(triggerId: string): void {
    this.pending.triggers = this.pending.triggers.filter((t) => t.id !== triggerId)
    this.pending.arguments = this.pending.arguments.filter((a) => a.trigger !== triggerId)
  }

  // -- save flow ----------------------------------------------------------------

  validate(): Violation[] {
    this.violations = validateAnnotations(this.pending, this.nTokens, this.index)
    return this.violations
  }

  /** Client-validates, then PUTs with the expected version; a stale version
   * parks the session in the conflict flow instead of losing edits. */
  async save(): Promise<SaveResult | { kind: "client-invalid"; violations: Violation[] }> {
    const violations = this.validate()
    if (violations.length > 0) {
      return { kind: "client-invalid", violations }
    }
    const result = await this.api.saveAnnotations(
      this.doc.doc_id, this.serverVersion, this.pending,
    )
    if (result.kind === "saved") {
      this.serverVersion = result.version
      this.conflict = null
    } else if (result.kind === "conflict") {
      this.conflict = {
        currentVersion: result.conflict.current_version,
        message: result.conflict.message,
      }
    } else {
      this.violations = result.violations
    }
    return result
  }

  /** Conflict dialog outcomes: adopt the server copy, or keep local edits and
   * retry on top of the refetched version. */
  async resolveConflict(choice: "take-server" | "keep-local"): Promise<void> {
    const fresh = await this.api.getDocument(this.doc.doc_id)
    this.doc = fresh
    this.serverVersion = fresh.version
    this.conflict = null
    if (choice === "take-server") {
      this.pending = {
        entities: [...(fresh.annotations.entities ?? [])],
        triggers: [...(fresh.annotations.triggers ?? [])],
        arguments: [...(fresh.annotations.arguments ?? [])],
      }
    }
  }
}
