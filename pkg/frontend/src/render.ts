// DOM rendering for the annotation workspace. Kept dumb on purpose: read
// the session, rebuild the affected containers, attach handlers that call
// back into the session.

import { entityColor, subtypeColor } from "./colors.js"
import type { AnnotationSession } from "./state.js"
import type { RoleSlot } from "./types.js"

const RTL_LANGUAGES = new Set(["fa", "ar", "he", "ur", "ps"])

export function textDirection(language: string): "rtl" | "ltr" {
  const primary = language.split("-")[0].toLowerCase()
  return RTL_LANGUAGES.has(primary) ? "rtl" : "ltr"
}

export function renderTokens(container: HTMLElement, session: AnnotationSession): void {
  container.innerHTML = ""
  container.dir = textDirection(session.doc.language)
  const triggerAt = new Map<number, string>()
  for (const t of session.pending.triggers) {
    for (let i = t.span[0]; i <= t.span[1]; i++) triggerAt.set(i, t.subtype)
  }
  const entityAt = new Set<number>()
  for (const e of session.pending.entities) {
    for (let i = e.span[0]; i <= e.span[1]; i++) entityAt.add(i)
  }
  for (let i = 0; i < session.nTokens; i++) {
    const span = document.createElement("span")
    span.className = "token"
    span.dataset.index = String(i)
    span.textContent = session.tokenText(i)
    if (triggerAt.has(i)) {
      span.style.backgroundColor = subtypeColor(triggerAt.get(i)!)
      span.classList.add("trigger-token")
    } else if (entityAt.has(i)) {
      span.style.backgroundColor = entityColor()
      span.classList.add("entity-token")
    }
    if (session.selection && i >= session.selection.start && i <= session.selection.end) {
      span.classList.add("selected")
    }
    span.addEventListener("click", (ev) => {
      const mouse = ev as MouseEvent
      if (mouse.shiftKey && session.selection) {
        session.select(Math.min(session.selection.start, i), Math.max(session.selection.start, i))
      } else {
        session.select(i, i)
      }
      renderTokens(container, session)
    })
    container.appendChild(span)
    container.appendChild(document.createTextNode(" "))
  }
}

/** Fill a <select> with exactly the slots the API returned for a subtype. */
export function renderRoleSelect(select: HTMLSelectElement, slots: RoleSlot[]): void {
  select.innerHTML = ""
  for (const slot of slots) {
    const option = document.createElement("option")
    option.value = slot.role
    option.textContent = slot.display_name
    select.appendChild(option)
  }
}

export function roleSelectValues(select: HTMLSelectElement): string[] {
  return Array.from(select.options).map((o) => o.value)
}

export function renderViolations(container: HTMLElement, session: AnnotationSession): void {
  container.innerHTML = ""
  for (const v of session.violations) {
    const li = document.createElement("li")
    li.className = "violation"
    li.dataset.element = v.element
    li.dataset.rule = v.rule
    li.textContent = `${v.element}: ${v.rule} — ${v.message}`
    container.appendChild(li)
  }
}

export function renderConflictDialog(container: HTMLElement, session: AnnotationSession): void {
  container.innerHTML = ""
  if (!session.conflict) {
    container.hidden = true
    return
  }
  container.hidden = false
  const text = document.createElement("p")
  text.textContent =
    `Someone else saved version ${session.conflict.currentVersion} of this ` +
    "document. Reload their copy, or keep your edits and save again?"
  const takeServer = document.createElement("button")
  takeServer.dataset.action = "take-server"
  takeServer.textContent = "Reload server copy"
  const keepLocal = document.createElement("button")
  keepLocal.dataset.action = "keep-local"
  keepLocal.textContent = "Keep my edits"
  container.append(text, takeServer, keepLocal)
}

export function renderArguments(container: HTMLElement, session: AnnotationSession): void {
  container.innerHTML = ""
  for (const a of session.pending.arguments) {
    const trigger = session.pending.triggers.find((t) => t.id === a.trigger)
    const entity = session.pending.entities.find((e) => e.id === a.entity)
    if (!trigger || !entity) continue
    const li = document.createElement("li")
    li.className = "argument-arc"
    li.dataset.trigger = a.trigger
    li.dataset.entity = a.entity
    li.textContent =
      `${session.spanText(trigger.span)} → ${entity.surface || session.spanText(entity.span)}` +
      ` [${a.role}]`
    container.appendChild(li)
  }
}
