from .core import (
    AnnotationService,
    AuthError,
    ConflictError,
    NotFoundError,
    RoleError,
    ServiceError,
    ValidationFailure,
)
from .storage import DocumentRow, ProjectRecord, SqliteStorage, Storage, UserRecord

__all__ = [
    "AnnotationService",
    "AuthError",
    "ConflictError",
    "NotFoundError",
    "RoleError",
    "ServiceError",
    "ValidationFailure",
    "DocumentRow",
    "ProjectRecord",
    "SqliteStorage",
    "Storage",
    "UserRecord",
]
