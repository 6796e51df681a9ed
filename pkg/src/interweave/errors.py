"""Exception types shared across the toolkit."""

from __future__ import annotations


class InterweaveError(Exception):
    """Base class for all toolkit errors."""


class OutOfRangeError(InterweaveError):
    """A score dimension received a value outside 0..5."""

    def __init__(self, dimension: str, value: int):
        self.dimension = dimension
        self.value = value
        super().__init__(f"score for {dimension.upper()} out of range 0..5: {value!r}")


class FormatError(InterweaveError):
    """A model response did not follow the required output structure."""

    def __init__(self, reason: str, raw: str | None = None):
        self.reason = reason
        self.raw = raw
        super().__init__(f"malformed model output: {reason}")


class EmptyResponseError(FormatError):
    def __init__(self):
        super().__init__("response is empty")


class MissingSlotError(InterweaveError):
    def __init__(self, name: str, kind: str = ""):
        self.name = name
        super().__init__(f"prompt slot {{{name}}} not supplied" + (f" for {kind}" if kind else ""))


class UnknownSlotError(InterweaveError):
    def __init__(self, name: str, kind: str = ""):
        self.name = name
        super().__init__(f"slot {{{name}}} is not used by the template" + (f" {kind}" if kind else ""))


class TransportError(InterweaveError):
    """Backend call failed after exhausting the retry budget."""

    def __init__(self, message: str, attempts: int = 1):
        self.attempts = attempts
        super().__init__(message)


class AuthMissingError(InterweaveError):
    def __init__(self, env_var: str):
        self.env_var = env_var
        super().__init__(f"credential environment variable {env_var} is not set")


class RateLimitedError(TransportError):
    """Remote endpoint kept rate-limiting beyond the backoff budget."""


class ImageUnresolvableError(InterweaveError):
    def __init__(self, ref: str):
        self.ref = ref
        super().__init__(f"image reference cannot be resolved: {ref}")


class EmptyCaptionError(InterweaveError):
    def __init__(self):
        super().__init__("image caption is empty")


class CaptionTooLongError(InterweaveError):
    def __init__(self, words: int, limit: int):
        self.words = words
        self.limit = limit
        super().__init__(f"caption has {words} words, limit is {limit}")


class QuestionTooLongError(InterweaveError):
    def __init__(self, words: int, limit: int):
        self.words = words
        self.limit = limit
        super().__init__(f"question has {words} words, limit is {limit}")


class DuplicateNameError(InterweaveError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"duplicate name under {path}")


class EmptyLevelError(InterweaveError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"empty level at {path}")


class EmptyRegistryError(InterweaveError):
    pass


class InsufficientPoolError(InterweaveError):
    def __init__(self, available: int, requested: int):
        self.available = available
        self.requested = requested
        super().__init__(f"pool holds {available} questions, {requested} requested")


class EmptySetError(InterweaveError):
    def __init__(self):
        super().__init__("score set is empty")


class UniverseMismatchError(InterweaveError):
    """Two score sets were compared over different sample universes."""

    def __init__(self, missing_in_model: tuple[str, ...], missing_in_human: tuple[str, ...]):
        self.missing_in_model = missing_in_model
        self.missing_in_human = missing_in_human
        parts = []
        if missing_in_model:
            parts.append(f"{len(missing_in_model)} samples missing from model set")
        if missing_in_human:
            parts.append(f"{len(missing_in_human)} samples missing from human set")
        super().__init__("; ".join(parts) or "universe mismatch")


class UnknownAnnotatorError(InterweaveError):
    def __init__(self, annotator_id: str):
        self.annotator_id = annotator_id
        super().__init__(f"annotator not registered: {annotator_id}")


class NotAssignedError(InterweaveError):
    def __init__(self, task_id: str, annotator_id: str):
        super().__init__(f"task {task_id} is not assigned to {annotator_id}")


class AlreadyResolvedError(InterweaveError):
    def __init__(self, task_id: str):
        super().__init__(f"task {task_id} is already resolved")


class NotInDiscussionError(InterweaveError):
    def __init__(self, task_id: str, state: str):
        super().__init__(f"task {task_id} is not in discussion (state: {state})")


class InvalidTaskStateError(InterweaveError):
    def __init__(self, task_id: str, state: str, action: str):
        super().__init__(f"cannot {action} task {task_id} in state {state}")


class ManifestError(InterweaveError):
    pass


class StageError(InterweaveError):
    """A refinement stage failed; carries whatever trace was recorded so far."""

    def __init__(self, stage: str, cause: Exception, trace=None):
        self.stage = stage
        self.cause = cause
        self.trace = trace
        super().__init__(f"{stage} stage failed: {cause}")
