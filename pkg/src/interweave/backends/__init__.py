from .gateway import AuditLog, Gateway
from .mock import (
    BUILTIN_SCRIPTS,
    CannedChatResponder,
    QueueResponder,
    canned_image_responder,
    classify_request,
    scripted_transport,
    transport_for_script,
)
from .profiles import (
    BackendKind,
    BackendProfile,
    BackendRole,
    ChatExchange,
    ChatPart,
    GenParams,
    RetryPolicy,
    text_exchange,
)
from .transports import HttpTransport, RetryableTransportFailure, ScriptedTransport

__all__ = [
    "AuditLog",
    "BUILTIN_SCRIPTS",
    "BackendKind",
    "BackendProfile",
    "BackendRole",
    "CannedChatResponder",
    "ChatExchange",
    "ChatPart",
    "Gateway",
    "GenParams",
    "HttpTransport",
    "QueueResponder",
    "RetryPolicy",
    "RetryableTransportFailure",
    "ScriptedTransport",
    "canned_image_responder",
    "classify_request",
    "scripted_transport",
    "text_exchange",
    "transport_for_script",
]
