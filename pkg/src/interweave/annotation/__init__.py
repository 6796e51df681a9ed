from .service import create_app, task_view
from .store import AnnotationStore, AnnotationTask, TaskState

__all__ = ["AnnotationStore", "AnnotationTask", "TaskState", "create_app", "task_view"]
