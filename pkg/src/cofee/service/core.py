"""Framework-free service operations: users, projects, imports, versioned submits.

The HTTP layer in `api.py` is a thin adapter over this class, so the same
operations can be driven in-process (tests, scripts) and over the wire.
"""

from __future__ import annotations

import hashlib
import io
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .. import corpus as corpus_io
from ..model import (
    SentenceAnnotation,
    from_dict,
    to_dict,
    validate_annotation,
)
from ..ontology import (
    ArgumentRole,
    EntityType,
    EventSubtype,
    EventType,
    Ontology,
    OntologyError,
    RoleSlot,
    load_ontology,
    parse_ontology,
    serialize_ontology,
)
from .storage import DocumentRow, ProjectRecord, Storage, UserRecord


class ServiceError(Exception):
    pass


class AuthError(ServiceError):
    """Missing or invalid credential (HTTP 401)."""


class RoleError(ServiceError):
    """Authenticated but not allowed (HTTP 403)."""


class NotFoundError(ServiceError):
    pass


class ConflictError(ServiceError):
    """Version compare-and-set lost, or duplicate name/id (HTTP 409)."""

    def __init__(self, message: str, current_version: Optional[int] = None):
        super().__init__(message)
        self.current_version = current_version


class ValidationFailure(ServiceError):
    """Submitted annotations broke schema rules (HTTP 422)."""

    def __init__(self, violations):
        super().__init__(f"{len(violations)} violation(s)")
        self.violations = violations


def hash_token(token: str) -> str:
    return hashlib.sha256(token.encode("utf-8")).hexdigest()


@dataclass
class AnnotationService:
    storage: Storage
    _ontology_cache: dict[str, Ontology] = field(default_factory=dict)

    # -- bootstrap / auth ---------------------------------------------------

    def bootstrap_admin(self, name: str, token: str) -> UserRecord:
        """Create the initial admin if the store has none yet; idempotent."""
        existing = self.storage.get_user_by_name(name)
        if existing:
            return existing
        user = UserRecord(id=f"u-{uuid.uuid4().hex[:8]}", name=name, role="admin",
                          token_hash=hash_token(token))
        self.storage.create_user(user)
        return user

    def authenticate(self, token: Optional[str]) -> UserRecord:
        if not token:
            raise AuthError("missing bearer token")
        user = self.storage.get_user_by_token_hash(hash_token(token))
        if user is None:
            raise AuthError("unknown credential")
        return user

    def _require_admin(self, caller: UserRecord) -> None:
        if caller.role != "admin":
            raise RoleError("admin role required")

    def _require_member(self, caller: UserRecord, project: ProjectRecord) -> None:
        if caller.role == "admin":
            return
        if caller.id not in project.member_ids:
            raise RoleError(f"not a member of project {project.id!r}")

    # -- users / projects -----------------------------------------------------

    def create_user(self, caller: UserRecord, name: str, role: str, token: str) -> UserRecord:
        self._require_admin(caller)
        if role not in ("admin", "annotator"):
            raise ServiceError(f"unknown role {role!r}")
        if self.storage.get_user_by_name(name):
            raise ConflictError(f"user name {name!r} already taken")
        user = UserRecord(id=f"u-{uuid.uuid4().hex[:8]}", name=name, role=role,
                          token_hash=hash_token(token))
        self.storage.create_user(user)
        return user

    def create_project(
        self,
        caller: UserRecord,
        name: str,
        member_ids: Optional[list[str]] = None,
        ontology_document: Optional[str] = None,
    ) -> ProjectRecord:
        self._require_admin(caller)
        if self.storage.get_project_by_name(name):
            raise ConflictError(f"project name {name!r} already taken")
        members = list(member_ids or [])
        for m in members:
            if not self.storage.get_user(m):
                raise NotFoundError(f"unknown user {m!r}")
        if caller.id not in members:
            members.append(caller.id)
        if ontology_document is None:
            ontology = load_ontology()
            ontology_document = serialize_ontology(ontology)
        else:
            ontology = parse_ontology(ontology_document)  # reject broken documents
        if self.storage.get_ontology(ontology.version) is None:
            self.storage.put_ontology(ontology.version, serialize_ontology(ontology))
        project = ProjectRecord(
            id=f"p-{uuid.uuid4().hex[:8]}", name=name,
            ontology_version=ontology.version, member_ids=tuple(sorted(members)),
        )
        self.storage.create_project(project)
        return project

    def _project(self, project_id: str) -> ProjectRecord:
        project = self.storage.get_project(project_id)
        if project is None:
            raise NotFoundError(f"unknown project {project_id!r}")
        return project

    def project_ontology(self, caller: UserRecord, project_id: str) -> str:
        project = self._project(project_id)
        self._require_member(caller, project)
        document = self.storage.get_ontology(project.ontology_version)
        if document is None:
            raise NotFoundError(f"ontology {project.ontology_version!r} missing")
        return document

    def _ontology(self, project: ProjectRecord) -> Ontology:
        cached = self._ontology_cache.get(project.ontology_version)
        if cached is not None:
            return cached
        document = self.storage.get_ontology(project.ontology_version)
        if document is None:
            raise NotFoundError(f"ontology {project.ontology_version!r} missing")
        ontology = parse_ontology(document)
        self._ontology_cache[project.ontology_version] = ontology
        return ontology

    def extend_project_ontology(
        self, caller: UserRecord, project_id: str, addition: dict
    ) -> str:
        """Add one schema element; returns the new ontology version."""
        self._require_admin(caller)
        project = self._project(project_id)
        ontology = self._ontology(project)
        try:
            extended = ontology.extend(_element_from_dict(addition))
        except OntologyError as exc:
            raise ValidationFailure([{"element": str(addition.get("id", "?")),
                                      "rule": "ontology-integrity", "message": str(exc)}])
        self.storage.put_ontology(extended.version, serialize_ontology(extended))
        self.storage.set_project_ontology(project.id, extended.version)
        return extended.version

    # -- documents -------------------------------------------------------------

    def import_documents(
        self, caller: UserRecord, project_id: str, csv_text: str,
        mapping: Optional[dict[str, str]] = None,
    ) -> int:
        """Create documents from a CSV payload at version 0.

        Rows may carry pre-extracted entity mentions in an 'entities' column
        (JSON list in the canonical mention shape).
        """
        self._require_admin(caller)
        project = self._project(project_id)
        mapping = mapping or {"text": "text"}
        docs = corpus_io.import_table(io.StringIO(csv_text), mapping)
        import csv as _csv
        import json as _json

        entity_rows: list[list] = []
        reader = _csv.DictReader(io.StringIO(csv_text))
        if reader.fieldnames and "entities" in reader.fieldnames:
            entity_rows = [
                _json.loads(row["entities"]) if row.get("entities") else []
                for row in reader
            ]
        for i, doc in enumerate(docs):
            doc_id = f"{project.id}/{doc.doc_id}"
            if self.storage.get_document(doc_id):
                raise ConflictError(f"duplicate document id {doc_id!r}")
            annotations = to_dict(doc)
            if entity_rows and entity_rows[i]:
                annotations["entities"] = entity_rows[i]
            self.storage.create_document(
                DocumentRow(
                    id=doc_id, project_id=project.id, text=doc.text,
                    language=doc.language, annotations=annotations, version=0,
                    status="unassigned", assignee=None,
                )
            )
        return len(docs)

    def assign_documents(
        self, caller: UserRecord, project_id: str,
        user_ids: list[str], doc_ids: Optional[list[str]] = None,
    ) -> dict[str, list[str]]:
        """Assign named (or all unassigned) documents round-robin to users."""
        self._require_admin(caller)
        project = self._project(project_id)
        for uid in user_ids:
            if not self.storage.get_user(uid):
                raise NotFoundError(f"unknown user {uid!r}")
            self.storage.add_member(project.id, uid)
        if doc_ids is None:
            doc_ids = [d.id for d in self.storage.list_documents(project.id)
                       if d.status == "unassigned"]
        out: dict[str, list[str]] = {uid: [] for uid in user_ids}
        for i, doc_id in enumerate(doc_ids):
            doc = self.storage.get_document(doc_id)
            if doc is None or doc.project_id != project.id:
                raise NotFoundError(f"unknown document {doc_id!r} in project {project.id!r}")
            uid = user_ids[i % len(user_ids)]
            self.storage.assign_document(doc_id, uid)
            out[uid].append(doc_id)
        return out

    def get_document(self, caller: UserRecord, doc_id: str) -> DocumentRow:
        doc = self.storage.get_document(doc_id)
        if doc is None:
            raise NotFoundError(f"unknown document {doc_id!r}")
        self._require_member(caller, self._project(doc.project_id))
        return doc

    def list_documents(self, caller: UserRecord, project_id: str) -> list[DocumentRow]:
        project = self._project(project_id)
        self._require_member(caller, project)
        docs = self.storage.list_documents(project_id)
        if caller.role == "admin":
            return docs
        return [d for d in docs if d.assignee == caller.id]

    def submit_annotation(
        self, caller: UserRecord, doc_id: str, annotations: dict,
        expected_version: int, done: bool = False,
    ) -> int:
        """Atomically replace a document's annotation set.

        The submitted mentions are re-based onto the stored text and tokens,
        validated against the project ontology, then written through a
        compare-and-set on `expected_version`.
        """
        doc = self.storage.get_document(doc_id)
        if doc is None:
            raise NotFoundError(f"unknown document {doc_id!r}")
        project = self._project(doc.project_id)
        self._require_member(caller, project)
        if caller.role != "admin" and doc.assignee != caller.id:
            raise RoleError(f"document {doc_id!r} is not assigned to {caller.name!r}")

        base = dict(doc.annotations)
        for key in ("entities", "triggers", "arguments"):
            base[key] = annotations.get(key, [])
        annotated = from_dict(base)
        violations = validate_annotation(annotated, self._ontology(project))
        if violations:
            raise ValidationFailure([
                {"element": v.element, "rule": v.rule, "message": v.message}
                for v in violations
            ])
        ok, version = self.storage.try_update_annotations(
            doc_id, expected_version, to_dict(annotated), caller.id, done=done
        )
        if not ok:
            raise ConflictError(
                f"version conflict on {doc_id!r}: expected {expected_version}, "
                f"stored {version}",
                current_version=version,
            )
        return version

    def export_project(self, caller: UserRecord, project_id: str, format: str = "jsonl") -> str:
        self._require_admin(caller)
        project = self._project(project_id)
        docs = [self.document_annotation(d) for d in self.storage.list_documents(project.id)]
        return corpus_io.export_annotations(docs, format=format)

    @staticmethod
    def document_annotation(doc: DocumentRow) -> SentenceAnnotation:
        payload = dict(doc.annotations)
        payload["doc_id"] = doc.id
        payload["text"] = doc.text
        payload["language"] = doc.language
        return from_dict(payload)


def _element_from_dict(addition: dict):
    """Decode an extension payload; `kind` picks the element type."""
    kind = addition.get("kind")
    try:
        if kind == "entity_type":
            return EntityType(id=addition["id"], display_name=addition["display_name"],
                              description=addition.get("description", ""))
        if kind == "event_type":
            return EventType(id=addition["id"], display_name=addition["display_name"],
                             ordinal=int(addition["ordinal"]))
        if kind == "subtype":
            return EventSubtype(id=addition["id"], display_name=addition["display_name"],
                                code=addition.get("code", ""))
        if kind == "role":
            return ArgumentRole(id=addition["id"], display_name=addition["display_name"],
                                ordinal=int(addition["ordinal"]))
        if kind == "slot":
            return RoleSlot(subtype=addition["subtype"], role=addition["role"],
                            allowed_entity_types=frozenset(addition["allowed_entity_types"]))
    except KeyError as exc:
        raise ServiceError(f"extension payload missing field {exc}") from None
    raise ServiceError(f"unknown extension kind {kind!r}")
