// Wire types for the annotation service API (canonical JSON shapes).

export type Tense = "past" | "present" | "future" | "unspecified"
export type Polarity = "positive" | "negative"
export type Modality = "asserted" | "other"

export interface TokenSpan {
  s: number
  e: number
}

export interface EntityMention {
  id: string
  span: [number, number]
  type: string
  surface: string
}

export interface TriggerMention {
  id: string
  span: [number, number]
  subtype: string
  tense: Tense
  polarity: Polarity
  modality: Modality
}

export interface ArgumentLink {
  trigger: string
  entity: string
  role: string
}

export interface AnnotationSet {
  entities: EntityMention[]
  triggers: TriggerMention[]
  arguments: ArgumentLink[]
}

export interface DocumentPayload {
  doc_id: string
  project_id: string
  text: string
  language: string
  version: number
  status: string
  assignee: string | null
  annotations: {
    tokens?: TokenSpan[]
    entities?: EntityMention[]
    triggers?: TriggerMention[]
    arguments?: ArgumentLink[]
  }
}

export interface RoleSlot {
  role: string
  display_name: string
  allowed_entity_types: string[]
}

export interface AllowedRolesResponse {
  subtype: string
  slots: RoleSlot[]
}

export interface OntologyJson {
  version: string
  entity_types: { id: string; display_name: string; custom: boolean }[]
  event_types: { id: string; display_name: string; ordinal: number; custom: boolean }[]
  subtypes: { id: string; display_name: string; code: string; parent: string; custom: boolean }[]
  roles: { id: string; display_name: string; ordinal: number; custom: boolean }[]
  slots: { subtype: string; role: string; allowed_entity_types: string[] }[]
}

export interface Violation {
  element: string
  rule: string
  message: string
}

export interface SaveConflict {
  message: string
  current_version: number
}
