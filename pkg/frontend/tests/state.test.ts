import { beforeEach, describe, expect, it } from "vitest"

import { AnnotationSession } from "../src/state.js"
import { OntologyIndex } from "../src/validate.js"
import { FakeApi, makeDoc, TOY_ONTOLOGY } from "./helpers.js"

describe("selection", () => {
  let session: AnnotationSession
  beforeEach(() => {
    const doc = makeDoc()
    session = new AnnotationSession(new FakeApi(doc), doc, new OntologyIndex(TOY_ONTOLOGY))
  })

  it("accepts ranges inside the sentence", () => {
    expect(session.select(1, 2)).toBe(true)
    expect(session.selection).toEqual({ start: 1, end: 2 })
  })

  it("blocks ranges past the sentence end", () => {
    expect(session.select(3, 7)).toBe(false)
    expect(session.selection).toBeNull()
  })

  it("tagging without a selection is a no-op", () => {
    expect(session.tagEntity("person")).toBeNull()
    expect(session.pending.entities).toHaveLength(0)
  })
})

describe("pending edits", () => {
  let session: AnnotationSession
  beforeEach(() => {
    const doc = makeDoc()
    session = new AnnotationSession(new FakeApi(doc), doc, new OntologyIndex(TOY_ONTOLOGY))
  })

  it("tags an entity with the selected surface", () => {
    session.select(2, 2)
    const mention = session.tagEntity("numeric")!
    expect(mention.surface).toBe("4")
    expect(session.selection).toBeNull() // consumed
  })

  it("warns on overlapping entity selections but still tags", () => {
    session.select(3, 3)
    session.tagEntity("person")
    session.select(3, 3)
    session.tagEntity("numeric")
    expect(session.pending.entities).toHaveLength(2)
    expect(session.warnings.some((w) => w.includes("overlaps"))).toBe(true)
  })

  it("rejects overlapping triggers outright", () => {
    session.select(1, 1)
    expect("id" in session.tagTrigger("life.death")).toBe(true)
    session.select(1, 1)
    const second = session.tagTrigger("life.injury")
    expect(second).toHaveProperty("error")
    expect(session.pending.triggers).toHaveLength(1)
  })

  it("asks for confirmation before replacing a pair's role", async () => {
    session.select(1, 1)
    const trigger = session.tagTrigger("life.death") as { id: string }
    session.select(3, 3)
    const entity = session.tagEntity("person")!
    await session.loadRoleOptions("life.death")

    expect(session.linkArgument(trigger.id, entity.id, "participant").kind).toBe("linked")
    const again = session.linkArgument(trigger.id, entity.id, "time")
    expect(again).toEqual({ kind: "needs-confirm", existingRole: "participant" })
    session.replaceArgument(trigger.id, entity.id, "time")
    expect(session.pending.arguments).toEqual([
      { trigger: trigger.id, entity: entity.id, role: "time" },
    ])
  })

  it("rejects roles outside the loaded drop-down options", async () => {
    session.select(1, 1)
    const trigger = session.tagTrigger("life.injury") as { id: string }
    session.select(3, 3)
    const entity = session.tagEntity("person")!
    await session.loadRoleOptions("life.injury")
    const outcome = session.linkArgument(trigger.id, entity.id, "number-of-participants")
    expect(outcome.kind).toBe("rejected")
  })

  it("removing a trigger drops its arcs", async () => {
    session.select(1, 1)
    const trigger = session.tagTrigger("life.death") as { id: string }
    session.select(3, 3)
    const entity = session.tagEntity("person")!
    await session.loadRoleOptions("life.death")
    session.linkArgument(trigger.id, entity.id, "participant")
    session.removeTrigger(trigger.id)
    expect(session.pending.arguments).toHaveLength(0)
  })
})

describe("save flow", () => {
  it("never submits a set the client validator rejects", async () => {
    const doc = makeDoc()
    const api = new FakeApi(doc)
    const session = new AnnotationSession(api, doc, new OntologyIndex(TOY_ONTOLOGY))
    session.select(1, 1)
    const trigger = session.tagTrigger("life.death") as { id: string }
    session.select(2, 2)
    const entity = session.tagEntity("numeric")!
    // slot-invalid: life.death has no slot for 'numeric' in role participant
    session.pending.arguments.push({
      trigger: trigger.id, entity: entity.id, role: "participant",
    })
    const result = await session.save()
    expect(result.kind).toBe("client-invalid")
    expect(api.saved).toHaveLength(0)
    expect(session.violations[0].rule).toBe("entity-type-not-allowed")
  })

  it("bumps the version on a clean save", async () => {
    const doc = makeDoc()
    const api = new FakeApi(doc)
    const session = new AnnotationSession(api, doc, new OntologyIndex(TOY_ONTOLOGY))
    session.select(1, 1)
    session.tagTrigger("life.death")
    const result = await session.save()
    expect(result.kind).toBe("saved")
    expect(session.serverVersion).toBe(1)
  })

  it("parks in the conflict flow on a stale save and can keep local edits", async () => {
    const doc = makeDoc()
    const api = new FakeApi(doc)
    const session = new AnnotationSession(api, doc, new OntologyIndex(TOY_ONTOLOGY))
    api.version = 1 // someone else saved meanwhile
    session.select(1, 1)
    session.tagTrigger("life.death")
    const result = await session.save()
    expect(result.kind).toBe("conflict")
    expect(session.conflict?.currentVersion).toBe(1)

    await session.resolveConflict("keep-local")
    expect(session.conflict).toBeNull()
    expect(session.serverVersion).toBe(1)
    expect(session.pending.triggers).toHaveLength(1) // edits kept
    const retry = await session.save()
    expect(retry.kind).toBe("saved")
  })

  it("take-server adopts the refetched copy", async () => {
    const doc = makeDoc()
    const api = new FakeApi(doc)
    const session = new AnnotationSession(api, doc, new OntologyIndex(TOY_ONTOLOGY))
    api.version = 2
    session.select(1, 1)
    session.tagTrigger("life.death")
    await session.save()
    await session.resolveConflict("take-server")
    expect(session.pending.triggers).toHaveLength(0) // local edit discarded
    expect(session.serverVersion).toBe(2)
  })
})
