"""HTTP+JSON API over the annotation service.

Configuration comes from the environment:
  COFEE_STORAGE_PATH   sqlite file (default ./cofee.db)
  COFEE_ADMIN_NAME     bootstrap admin user name (default "admin")
  COFEE_ADMIN_TOKEN    bootstrap admin bearer token (required to serve)
  COFEE_BIND           host:port for `cofee serve` (default 127.0.0.1:8570)

Status codes: 401 bad credential, 403 wrong role / not a member,
404 unknown id, 409 version or name conflict, 422 validation (body lists
violations).
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response
from pydantic import BaseModel, Field

from ..ontology import UnknownElementError, parse_ontology
from .core import (
    AnnotationService,
    AuthError,
    ConflictError,
    NotFoundError,
    RoleError,
    ServiceError,
    ValidationFailure,
)
from .storage import SqliteStorage, UserRecord


class CreateUserBody(BaseModel):
    name: str
    role: str = "annotator"
    token: str


class CreateProjectBody(BaseModel):
    name: str
    member_ids: list[str] = Field(default_factory=list)
    ontology_document: Optional[str] = None


class ImportBody(BaseModel):
    csv_text: str
    mapping: Optional[dict[str, str]] = None


class AssignBody(BaseModel):
    user_ids: list[str]
    doc_ids: Optional[list[str]] = None


class SubmitBody(BaseModel):
    expected_version: int
    annotations: dict
    done: bool = False


class ExtendBody(BaseModel):
    addition: dict


def create_app(
    storage_path: str,
    admin_name: str = "admin",
    admin_token: str = "",
) -> FastAPI:
    service = AnnotationService(storage=SqliteStorage(storage_path))
    if admin_token:
        service.bootstrap_admin(admin_name, admin_token)

    app = FastAPI(title="cofee annotation service")

    def current_user(authorization: Optional[str] = Header(default=None)) -> UserRecord:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:].strip()
        try:
            return service.authenticate(token)
        except AuthError as exc:
            raise HTTPException(status_code=401, detail=str(exc))

    def translate(exc: ServiceError) -> HTTPException:
        if isinstance(exc, AuthError):
            return HTTPException(status_code=401, detail=str(exc))
        if isinstance(exc, RoleError):
            return HTTPException(status_code=403, detail=str(exc))
        if isinstance(exc, NotFoundError):
            return HTTPException(status_code=404, detail=str(exc))
        if isinstance(exc, ValidationFailure):
            return HTTPException(status_code=422, detail={"violations": exc.violations})
        if isinstance(exc, ConflictError):
            return HTTPException(
                status_code=409,
                detail={"message": str(exc), "current_version": exc.current_version},
            )
        return HTTPException(status_code=400, detail=str(exc))

    def doc_payload(doc) -> dict:
        return {
            "doc_id": doc.id,
            "project_id": doc.project_id,
            "text": doc.text,
            "language": doc.language,
            "version": doc.version,
            "status": doc.status,
            "assignee": doc.assignee,
            "annotations": doc.annotations,
        }

    @app.post("/api/users", status_code=201)
    def post_user(body: CreateUserBody, caller: UserRecord = Depends(current_user)):
        try:
            user = service.create_user(caller, body.name, body.role, body.token)
        except ServiceError as exc:
            raise translate(exc)
        return {"id": user.id, "name": user.name, "role": user.role}

    @app.post("/api/projects", status_code=201)
    def post_project(body: CreateProjectBody, caller: UserRecord = Depends(current_user)):
        try:
            project = service.create_project(
                caller, body.name, body.member_ids, body.ontology_document
            )
        except ServiceError as exc:
            raise translate(exc)
        return {
            "id": project.id,
            "name": project.name,
            "ontology_version": project.ontology_version,
            "member_ids": list(project.member_ids),
        }

    @app.post("/api/projects/{project_id}/documents", status_code=201)
    def post_documents(
        project_id: str, body: ImportBody, caller: UserRecord = Depends(current_user)
    ):
        try:
            n = service.import_documents(caller, project_id, body.csv_text, body.mapping)
        except ServiceError as exc:
            raise translate(exc)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"imported": n}

    @app.post("/api/projects/{project_id}/assignments")
    def post_assignments(
        project_id: str, body: AssignBody, caller: UserRecord = Depends(current_user)
    ):
        try:
            return service.assign_documents(caller, project_id, body.user_ids, body.doc_ids)
        except ServiceError as exc:
            raise translate(exc)

    @app.get("/api/projects/{project_id}/documents")
    def get_documents(project_id: str, caller: UserRecord = Depends(current_user)):
        try:
            docs = service.list_documents(caller, project_id)
        except ServiceError as exc:
            raise translate(exc)
        return {"documents": [doc_payload(d) for d in docs]}

    @app.get("/api/documents/{doc_id:path}")
    def get_document(doc_id: str, caller: UserRecord = Depends(current_user)):
        try:
            return doc_payload(service.get_document(caller, doc_id))
        except ServiceError as exc:
            raise translate(exc)

    @app.put("/api/documents/{doc_id:path}/annotations")
    def put_annotations(
        doc_id: str, body: SubmitBody, caller: UserRecord = Depends(current_user)
    ):
        try:
            version = service.submit_annotation(
                caller, doc_id, body.annotations, body.expected_version, body.done
            )
        except ServiceError as exc:
            raise translate(exc)
        return {"version": version}

    @app.get("/api/projects/{project_id}/export")
    def get_export(
        project_id: str,
        format: str = Query(default="jsonl", pattern="^(csv|jsonl)$"),
        caller: UserRecord = Depends(current_user),
    ):
        try:
            payload = service.export_project(caller, project_id, format)
        except ServiceError as exc:
            raise translate(exc)
        media = "text/csv" if format == "csv" else "application/x-ndjson"
        return Response(content=payload, media_type=f"{media}; charset=utf-8")

    @app.get("/api/projects/{project_id}/ontology")
    def get_ontology(
        project_id: str,
        format: str = Query(default="text", pattern="^(text|json)$"),
        caller: UserRecord = Depends(current_user),
    ):
        try:
            document = service.project_ontology(caller, project_id)
        except ServiceError as exc:
            raise translate(exc)
        if format == "text":
            return Response(content=document, media_type="text/plain; charset=utf-8")
        o = parse_ontology(document)
        return {
            "version": o.version,
            "entity_types": [
                {"id": e.id, "display_name": e.display_name, "custom": e.custom}
                for e in o.entity_types
            ],
            "event_types": [
                {"id": t.id, "display_name": t.display_name, "ordinal": t.ordinal,
                 "custom": t.custom}
                for t in o.event_types
            ],
            "subtypes": [
                {"id": s.id, "display_name": s.display_name, "code": s.code,
                 "parent": s.parent, "custom": s.custom}
                for s in o.subtypes
            ],
            "roles": [
                {"id": r.id, "display_name": r.display_name, "ordinal": r.ordinal,
                 "custom": r.custom}
                for r in o.roles
            ],
            "slots": [
                {"subtype": s.subtype, "role": s.role,
                 "allowed_entity_types": sorted(s.allowed_entity_types)}
                for s in o.role_slots
            ],
        }

    @app.post("/api/projects/{project_id}/ontology", status_code=201)
    def post_ontology_extension(
        project_id: str, body: ExtendBody, caller: UserRecord = Depends(current_user)
    ):
        try:
            version = service.extend_project_ontology(caller, project_id, body.addition)
        except ServiceError as exc:
            raise translate(exc)
        return {"ontology_version": version}

    @app.get("/api/projects/{project_id}/subtypes/{subtype_id:path}/roles")
    def get_allowed_roles(
        project_id: str, subtype_id: str, caller: UserRecord = Depends(current_user)
    ):
        try:
            document = service.project_ontology(caller, project_id)
        except ServiceError as exc:
            raise translate(exc)
        o = parse_ontology(document)
        try:
            slots = o.allowed_roles(subtype_id)
        except UnknownElementError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "subtype": subtype_id,
            "slots": [
                {
                    "role": s.role,
                    "display_name": o.role(s.role).display_name,
                    "allowed_entity_types": sorted(s.allowed_entity_types),
                }
                for s in slots
            ],
        }

    app.state.service = service
    return app


def app_from_env() -> FastAPI:
    token = os.environ.get("COFEE_ADMIN_TOKEN", "")
    if not token:
        raise RuntimeError("COFEE_ADMIN_TOKEN must be set to serve")
    return create_app(
        storage_path=os.environ.get("COFEE_STORAGE_PATH", "cofee.db"),
        admin_name=os.environ.get("COFEE_ADMIN_NAME", "admin"),
        admin_token=token,
    )
