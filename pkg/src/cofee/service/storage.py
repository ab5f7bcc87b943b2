"""Persistence for the annotation service.

`Storage` is the narrow interface the service core talks to; the bundled
implementation is an embedded SQLite database so a single process serves
desk-scale projects. Server-grade stores can be plugged in by implementing
the same interface. The one concurrency-critical operation is
`try_update_annotations`, an atomic compare-and-set on the document version.
"""

from __future__ import annotations

import json
import sqlite3
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class UserRecord:
    id: str
    name: str
    role: str  # admin | annotator
    token_hash: str


@dataclass(frozen=True)
class ProjectRecord:
    id: str
    name: str
    ontology_version: str
    member_ids: tuple[str, ...]


@dataclass(frozen=True)
class DocumentRow:
    id: str
    project_id: str
    text: str
    language: str
    annotations: dict
    version: int
    status: str  # unassigned | assigned | done
    assignee: Optional[str]


class Storage:
    """Interface contract; see SqliteStorage for the bundled implementation."""

    def create_user(self, user: UserRecord) -> None: raise NotImplementedError
    def get_user(self, user_id: str) -> Optional[UserRecord]: raise NotImplementedError
    def get_user_by_name(self, name: str) -> Optional[UserRecord]: raise NotImplementedError
    def get_user_by_token_hash(self, token_hash: str) -> Optional[UserRecord]: raise NotImplementedError
    def count_admins(self) -> int: raise NotImplementedError

    def put_ontology(self, version: str, document: str) -> None: raise NotImplementedError
    def get_ontology(self, version: str) -> Optional[str]: raise NotImplementedError

    def create_project(self, project: ProjectRecord) -> None: raise NotImplementedError
    def get_project(self, project_id: str) -> Optional[ProjectRecord]: raise NotImplementedError
    def get_project_by_name(self, name: str) -> Optional[ProjectRecord]: raise NotImplementedError
    def set_project_ontology(self, project_id: str, version: str) -> None: raise NotImplementedError
    def add_member(self, project_id: str, user_id: str) -> None: raise NotImplementedError

    def create_document(self, doc: DocumentRow) -> None: raise NotImplementedError
    def get_document(self, doc_id: str) -> Optional[DocumentRow]: raise NotImplementedError
    def list_documents(self, project_id: str) -> list[DocumentRow]: raise NotImplementedError
    def assign_document(self, doc_id: str, user_id: str) -> None: raise NotImplementedError

    def try_update_annotations(
        self, doc_id: str, expected_version: int, annotations: dict, user_id: str,
        done: bool = False,
    ) -> tuple[bool, int]:
        """Replace annotations iff the stored version equals `expected_version`.

        Returns (accepted, current_version); on success the returned version
        is expected_version + 1 and an audit row is appended atomically.
        """
        raise NotImplementedError

    def audit_log(self, doc_id: str) -> list[tuple[str, float, int]]: raise NotImplementedError


_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id TEXT PRIMARY KEY, name TEXT UNIQUE NOT NULL, role TEXT NOT NULL,
    token_hash TEXT UNIQUE NOT NULL
);
CREATE TABLE IF NOT EXISTS ontologies (
    version TEXT PRIMARY KEY, document TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS projects (
    id TEXT PRIMARY KEY, name TEXT UNIQUE NOT NULL, ontology_version TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS project_members (
    project_id TEXT NOT NULL, user_id TEXT NOT NULL,
    PRIMARY KEY (project_id, user_id)
);
CREATE TABLE IF NOT EXISTS documents (
    id TEXT PRIMARY KEY, project_id TEXT NOT NULL, text TEXT NOT NULL,
    language TEXT NOT NULL, annotations TEXT NOT NULL, version INTEGER NOT NULL,
    status TEXT NOT NULL, assignee TEXT
);
CREATE TABLE IF NOT EXISTS audit (
    doc_id TEXT NOT NULL, user_id TEXT NOT NULL, ts REAL NOT NULL,
    version INTEGER NOT NULL
);
"""


class SqliteStorage(Storage):
    def __init__(self, path: str | Path):
        self.path = str(path)
        with self._connect() as conn:
            conn.executescript(_SCHEMA)

    def _connect(self) -> sqlite3.Connection:
        # One connection per call: cheap for an embedded store and keeps
        # every call usable from any thread.
        conn = sqlite3.connect(self.path, timeout=30.0)
        conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA busy_timeout=30000")
        return conn

    # -- users ------------------------------------------------------------

    def create_user(self, user: UserRecord) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO users (id, name, role, token_hash) VALUES (?, ?, ?, ?)",
                (user.id, user.name, user.role, user.token_hash),
            )

    def _user_from_row(self, row) -> Optional[UserRecord]:
        return UserRecord(*row) if row else None

    def get_user(self, user_id: str) -> Optional[UserRecord]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, name, role, token_hash FROM users WHERE id = ?", (user_id,)
            ).fetchone()
        return self._user_from_row(row)

    def get_user_by_name(self, name: str) -> Optional[UserRecord]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, name, role, token_hash FROM users WHERE name = ?", (name,)
            ).fetchone()
        return self._user_from_row(row)

    def get_user_by_token_hash(self, token_hash: str) -> Optional[UserRecord]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, name, role, token_hash FROM users WHERE token_hash = ?",
                (token_hash,),
            ).fetchone()
        return self._user_from_row(row)

    def count_admins(self) -> int:
        with self._connect() as conn:
            (n,) = conn.execute("SELECT COUNT(*) FROM users WHERE role = 'admin'").fetchone()
        return n

    # -- ontologies ---------------------------------------------------------

    def put_ontology(self, version: str, document: str) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO ontologies (version, document) VALUES (?, ?)",
                (version, document),
            )

    def get_ontology(self, version: str) -> Optional[str]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT document FROM ontologies WHERE version = ?", (version,)
            ).fetchone()
        return row[0] if row else None

    # -- projects -----------------------------------------------------------

    def create_project(self, project: ProjectRecord) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO projects (id, name, ontology_version) VALUES (?, ?, ?)",
                (project.id, project.name, project.ontology_version),
            )
            conn.executemany(
                "INSERT OR IGNORE INTO project_members (project_id, user_id) VALUES (?, ?)",
                [(project.id, m) for m in project.member_ids],
            )

    def _project(self, conn, row) -> Optional[ProjectRecord]:
        if not row:
            return None
        members = tuple(
            r[0]
            for r in conn.execute(
                "SELECT user_id FROM project_members WHERE project_id = ? ORDER BY user_id",
                (row[0],),
            )
        )
        return ProjectRecord(id=row[0], name=row[1], ontology_version=row[2], member_ids=members)

    def get_project(self, project_id: str) -> Optional[ProjectRecord]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, name, ontology_version FROM projects WHERE id = ?", (project_id,)
            ).fetchone()
            return self._project(conn, row)

    def get_project_by_name(self, name: str) -> Optional[ProjectRecord]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, name, ontology_version FROM projects WHERE name = ?", (name,)
            ).fetchone()
            return self._project(conn, row)

    def set_project_ontology(self, project_id: str, version: str) -> None:
        with self._connect() as conn:
            conn.execute(
                "UPDATE projects SET ontology_version = ? WHERE id = ?", (version, project_id)
            )

    def add_member(self, project_id: str, user_id: str) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT OR IGNORE INTO project_members (project_id, user_id) VALUES (?, ?)",
                (project_id, user_id),
            )

    # -- documents ------------------------------------------------------------

    def create_document(self, doc: DocumentRow) -> None:
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO documents (id, project_id, text, language, annotations,"
                " version, status, assignee) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (doc.id, doc.project_id, doc.text, doc.language,
                 json.dumps(doc.annotations, ensure_ascii=False), doc.version,
                 doc.status, doc.assignee),
            )
            conn.execute(
                "INSERT INTO audit (doc_id, user_id, ts, version) VALUES (?, ?, ?, ?)",
                (doc.id, "", time.time(), doc.version),
            )

    def _doc(self, row) -> Optional[DocumentRow]:
        if not row:
            return None
        return DocumentRow(
            id=row[0], project_id=row[1], text=row[2], language=row[3],
            annotations=json.loads(row[4]), version=row[5], status=row[6], assignee=row[7],
        )

    def get_document(self, doc_id: str) -> Optional[DocumentRow]:
        with self._connect() as conn:
            row = conn.execute(
                "SELECT id, project_id, text, language, annotations, version, status,"
                " assignee FROM documents WHERE id = ?",
                (doc_id,),
            ).fetchone()
        return self._doc(row)

    def list_documents(self, project_id: str) -> list[DocumentRow]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT id, project_id, text, language, annotations, version, status,"
                " assignee FROM documents WHERE project_id = ? ORDER BY id",
                (project_id,),
            ).fetchall()
        return [self._doc(r) for r in rows]

    def assign_document(self, doc_id: str, user_id: str) -> None:
        with self._connect() as conn:
            conn.execute(
                "UPDATE documents SET assignee = ?, status = 'assigned' WHERE id = ?",
                (user_id, doc_id),
            )

    def try_update_annotations(
        self, doc_id: str, expected_version: int, annotations: dict, user_id: str,
        done: bool = False,
    ) -> tuple[bool, int]:
        status = "done" if done else "assigned"
        with self._connect() as conn:
            conn.execute("BEGIN IMMEDIATE")
            cur = conn.execute(
                "UPDATE documents SET annotations = ?, version = version + 1,"
                " status = ? WHERE id = ? AND version = ?",
                (json.dumps(annotations, ensure_ascii=False), status, doc_id,
                 expected_version),
            )
            if cur.rowcount == 1:
                new_version = expected_version + 1
                conn.execute(
                    "INSERT INTO audit (doc_id, user_id, ts, version) VALUES (?, ?, ?, ?)",
                    (doc_id, user_id, time.time(), new_version),
                )
                return True, new_version
            row = conn.execute(
                "SELECT version FROM documents WHERE id = ?", (doc_id,)
            ).fetchone()
            return False, row[0] if row else -1

    def audit_log(self, doc_id: str) -> list[tuple[str, float, int]]:
        with self._connect() as conn:
            rows = conn.execute(
                "SELECT user_id, ts, version FROM audit WHERE doc_id = ? ORDER BY version",
                (doc_id,),
            ).fetchall()
        return [(r[0], r[1], r[2]) for r in rows]
