// Thin typed client over the annotation service HTTP API. The UI talks to
// the backend exclusively through this module.

import type {
  AllowedRolesResponse,
  AnnotationSet,
  DocumentPayload,
  OntologyJson,
  SaveConflict,
  Violation,
} from "./types.js"

export type SaveResult =
  | { kind: "saved"; version: number }
  | { kind: "conflict"; conflict: SaveConflict }
  | { kind: "invalid"; violations: Violation[] }

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
  }
}

export class ApiClient {
  constructor(private baseUrl: string, private token: string) {}

  private headers(): Record<string, string> {
    return {
      "Authorization": `Bearer ${this.token}`,
      "Content-Type": "application/json",
    }
  }

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.baseUrl + path, { headers: this.headers() })
    if (!res.ok) {
      throw new ApiError(res.status, await res.text())
    }
    return (await res.json()) as T
  }

  async listDocuments(projectId: string): Promise<DocumentPayload[]> {
    const body = await this.getJson<{ documents: DocumentPayload[] }>(
      `/api/projects/${projectId}/documents`,
    )
    return body.documents
  }

  getDocument(docId: string): Promise<DocumentPayload> {
    return this.getJson<DocumentPayload>(`/api/documents/${docId}`)
  }

  getOntology(projectId: string): Promise<OntologyJson> {
    return this.getJson<OntologyJson>(`/api/projects/${projectId}/ontology?format=json`)
  }

  getAllowedRoles(projectId: string, subtype: string): Promise<AllowedRolesResponse> {
    return this.getJson<AllowedRolesResponse>(
      `/api/projects/${projectId}/subtypes/${subtype}/roles`,
    )
  }

  async saveAnnotations(
    docId: string,
    expectedVersion: number,
    annotations: AnnotationSet,
  ): Promise<SaveResult> {
    const res = await fetch(`${this.baseUrl}/api/documents/${docId}/annotations`, {
      method: "PUT",
      headers: this.headers(),
      body: JSON.stringify({ expected_version: expectedVersion, annotations }),
    })
    if (res.ok) {
      const body = (await res.json()) as { version: number }
      return { kind: "saved", version: body.version }
    }
    if (res.status === 409) {
      const body = (await res.json()) as { detail: SaveConflict }
      return { kind: "conflict", conflict: body.detail }
    }
    if (res.status === 422) {
      const body = (await res.json()) as { detail: { violations: Violation[] } }
      return { kind: "invalid", violations: body.detail.violations }
    }
    throw new ApiError(res.status, await res.text())
  }
}
