// Entry point: wires the session to the page. Expects the service base URL,
// bearer token, and project id from the login form (persisted in
// localStorage for convenience).

import { ApiClient } from "./api.js"
import {
  renderArguments,
  renderConflictDialog,
  renderRoleSelect,
  renderTokens,
  renderViolations,
} from "./render.js"
import { AnnotationSession } from "./state.js"
import type { Modality, Polarity, Tense } from "./types.js"
import { OntologyIndex } from "./validate.js"

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing #${id}`)
  return node as T
}

export async function startApp(): Promise<void> {
  const baseUrl = (localStorage.getItem("cofee.base") ?? "").replace(/\/$/, "")
  const token = localStorage.getItem("cofee.token") ?? ""
  const projectId = localStorage.getItem("cofee.project") ?? ""
  if (!baseUrl || !token || !projectId) {
    el("login").hidden = false
    el<HTMLButtonElement>("login-save").addEventListener("click", () => {
      localStorage.setItem("cofee.base", el<HTMLInputElement>("login-base").value)
      localStorage.setItem("cofee.token", el<HTMLInputElement>("login-token").value)
      localStorage.setItem("cofee.project", el<HTMLInputElement>("login-project").value)
      location.reload()
    })
    return
  }

  const api = new ApiClient(baseUrl, token)
  const ontology = new OntologyIndex(await api.getOntology(projectId))
  const docs = await api.listDocuments(projectId)
  const docSelect = el<HTMLSelectElement>("doc-select")
  for (const d of docs) {
    const option = document.createElement("option")
    option.value = d.doc_id
    option.textContent = `${d.doc_id} (v${d.version}, ${d.status})`
    docSelect.appendChild(option)
  }

  let session: AnnotationSession | null = null

  const subtypeSelect = el<HTMLSelectElement>("subtype-select")
  for (const s of ontology.ontology.subtypes) {
    const option = document.createElement("option")
    option.value = s.id
    option.textContent = `${s.display_name} (${s.parent})`
    subtypeSelect.appendChild(option)
  }
  const entityTypeSelect = el<HTMLSelectElement>("entity-type-select")
  for (const e of ontology.ontology.entity_types) {
    const option = document.createElement("option")
    option.value = e.id
    option.textContent = e.display_name
    entityTypeSelect.appendChild(option)
  }

  function redraw(): void {
    if (!session) return
    renderTokens(el("tokens"), session)
    renderViolations(el("violations"), session)
    renderConflictDialog(el("conflict"), session)
    renderArguments(el("arguments"), session)
    el("version").textContent = `v${session.serverVersion}`
    refreshMentionPickers(session)
  }

  function refreshMentionPickers(s: AnnotationSession): void {
    const triggerPick = el<HTMLSelectElement>("arg-trigger")
    const entityPick = el<HTMLSelectElement>("arg-entity")
    triggerPick.innerHTML = ""
    entityPick.innerHTML = ""
    for (const t of s.pending.triggers) {
      const option = document.createElement("option")
      option.value = t.id
      option.textContent = `${s.spanText(t.span)} (${t.subtype})`
      triggerPick.appendChild(option)
    }
    for (const e of s.pending.entities) {
      const option = document.createElement("option")
      option.value = e.id
      option.textContent = `${e.surface || s.spanText(e.span)} (${e.type})`
      entityPick.appendChild(option)
    }
  }

  async function openDocument(docId: string): Promise<void> {
    session = new AnnotationSession(api, await api.getDocument(docId), ontology)
    redraw()
  }

  docSelect.addEventListener("change", () => void openDocument(docSelect.value))
  if (docs.length > 0) await openDocument(docs[0].doc_id)

  el<HTMLButtonElement>("tag-entity").addEventListener("click", () => {
    session?.tagEntity(entityTypeSelect.value)
    redraw()
  })

  el<HTMLButtonElement>("tag-trigger").addEventListener("click", () => {
    if (!session) return
    const result = session.tagTrigger(
      subtypeSelect.value,
      el<HTMLSelectElement>("tense-select").value as Tense,
      el<HTMLSelectElement>("polarity-select").value as Polarity,
      el<HTMLSelectElement>("modality-select").value as Modality,
    )
    if ("error" in result) el("status").textContent = result.error
    redraw()
  })

  el<HTMLSelectElement>("arg-trigger").addEventListener("change", async () => {
    if (!session) return
    const trigger = session.pending.triggers.find(
      (t) => t.id === el<HTMLSelectElement>("arg-trigger").value,
    )
    if (!trigger) return
    const slots = await session.loadRoleOptions(trigger.subtype)
    renderRoleSelect(el<HTMLSelectElement>("role-select"), slots)
  })

  el<HTMLButtonElement>("link-argument").addEventListener("click", () => {
    if (!session) return
    const triggerId = el<HTMLSelectElement>("arg-trigger").value
    const entityId = el<HTMLSelectElement>("arg-entity").value
    const role = el<HTMLSelectElement>("role-select").value
    const outcome = session.linkArgument(triggerId, entityId, role)
    if (outcome.kind === "needs-confirm") {
      if (confirm(`Replace existing role ${outcome.existingRole}?`)) {
        session.replaceArgument(triggerId, entityId, role)
      }
    } else if (outcome.kind === "rejected") {
      el("status").textContent = outcome.reason
    }
    redraw()
  })

  el<HTMLButtonElement>("save").addEventListener("click", async () => {
    if (!session) return
    const result = await session.save()
    el("status").textContent =
      result.kind === "saved" ? `saved v${session.serverVersion}` : result.kind
    redraw()
  })

  el("conflict").addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement
    const action = target.dataset.action
    if (!session || (action !== "take-server" && action !== "keep-local")) return
    await session.resolveConflict(action)
    if (action === "keep-local") await session.save()
    redraw()
  })
}

if (typeof document !== "undefined" && document.getElementById("tokens")) {
  void startApp()
}
