"""JSON-over-HTTP surface for the annotation workflow.

Endpoints (bearer token identifies the annotator):

    GET  /healthz                     liveness, no auth
    GET  /tasks/next                  lease the next task to score
    GET  /tasks?state=in_discussion   list tasks, optionally by state
    GET  /tasks/{id}                  task detail (per-annotator vectors
                                      visible once the task is in discussion)
    POST /tasks/{id}/score            {"tcc": .., "icc": .., "iq": .., "its": ..}
    POST /tasks/{id}/resolve          {"scores": {...}, "resolvers": [ids]}
    GET  /export                      resolved scores as ScoreRecord JSONL
    GET  /images/{ref}                image bytes from the blob store
"""

from __future__ import annotations

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response
from pydantic import BaseModel, Field

from ..corpus import BlobStore
from ..errors import (
    AlreadyResolvedError,
    ImageUnresolvableError,
    InvalidTaskStateError,
    NotAssignedError,
    NotInDiscussionError,
    OutOfRangeError,
    UnknownAnnotatorError,
)
from ..model import ScoreVector, dumps_canonical
from ..prompts import DIMENSION_RUBRICS
from .store import AnnotationStore, AnnotationTask, TaskState


class ScoreBody(BaseModel):
    tcc: int = Field(ge=0, le=5)
    icc: int = Field(ge=0, le=5)
    iq: int = Field(ge=0, le=5)
    its: int = Field(ge=0, le=5)

    def vector(self) -> ScoreVector:
        return ScoreVector(self.tcc, self.icc, self.iq, self.its)


class ResolveBody(BaseModel):
    scores: ScoreBody
    resolvers: list[str]


def task_view(task: AnnotationTask, annotator_id: str | None = None) -> dict:
    sample = task.sample
    view = {
        "task_id": task.task_id,
        "state": task.state.value,
        "assigned_to": list(task.assigned_to),
        "question": sample.question,
        "answer_text": sample.answer_text,
        "image_url": f"/images/{sample.image_ref}" if sample.image_ref else None,
        "sample_id": sample.sample_id,
        "generator_id": sample.generator_id,
        "rubric": DIMENSION_RUBRICS,
        "your_score_submitted": annotator_id in task.scores if annotator_id else False,
    }
    if task.state in (TaskState.IN_DISCUSSION, TaskState.RESOLVED):
        view["scores"] = {a: v.as_dict() for a, v in sorted(task.scores.items())}
    if task.final is not None:
        view["final"] = task.final.as_dict()
    return view


def create_app(
    store: AnnotationStore,
    tokens: dict[str, str],
    blob_store: BlobStore | None = None,
) -> FastAPI:
    app = FastAPI(title="annotation-service")
    app.state.store = store

    def annotator_from(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        annotator = tokens.get(authorization.removeprefix("Bearer ").strip())
        if annotator is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return annotator

    def translate(exc: Exception) -> HTTPException:
        if isinstance(exc, KeyError):
            return HTTPException(status_code=404, detail="task not found")
        if isinstance(exc, UnknownAnnotatorError):
            return HTTPException(status_code=401, detail=str(exc))
        if isinstance(exc, NotAssignedError):
            return HTTPException(status_code=403, detail=str(exc))
        if isinstance(exc, (AlreadyResolvedError, NotInDiscussionError, InvalidTaskStateError)):
            return HTTPException(status_code=409, detail=str(exc))
        if isinstance(exc, OutOfRangeError):
            return HTTPException(status_code=422, detail=str(exc))
        return HTTPException(status_code=500, detail=str(exc))

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "tasks": store.counts()}

    @app.get("/tasks/next")
    def next_task(annotator: str = Depends(annotator_from)):
        try:
            task = store.next_task(annotator)
        except UnknownAnnotatorError as exc:
            raise translate(exc)
        return {"task": task_view(task, annotator) if task else None}

    @app.get("/tasks")
    def list_tasks(
        state: str | None = Query(default=None),
        annotator: str = Depends(annotator_from),
    ):
        try:
            filter_state = TaskState(state) if state else None
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown state {state!r}")
        tasks = store.list_tasks(filter_state)
        return {"tasks": [task_view(t, annotator) for t in tasks]}

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str, annotator: str = Depends(annotator_from)):
        try:
            task = store.get_task(task_id)
        except KeyError as exc:
            raise translate(exc)
        return task_view(task, annotator)

    @app.post("/tasks/{task_id}/score")
    def submit_score(task_id: str, body: ScoreBody, annotator: str = Depends(annotator_from)):
        try:
            state = store.submit_score(annotator, task_id, body.vector())
        except Exception as exc:  # noqa: BLE001 - translated to HTTP codes
            raise translate(exc)
        return {"task_id": task_id, "state": state.value}

    @app.post("/tasks/{task_id}/resolve")
    def resolve(task_id: str, body: ResolveBody, annotator: str = Depends(annotator_from)):
        resolvers = body.resolvers or [annotator]
        try:
            state = store.resolve_discussion(task_id, body.scores.vector(), resolvers)
        except Exception as exc:  # noqa: BLE001
            raise translate(exc)
        return {"task_id": task_id, "state": state.value}

    @app.get("/export")
    def export(annotator: str = Depends(annotator_from)):
        lines = [dumps_canonical(r.as_dict()) for r in store.export_records()]
        body = "\n".join(lines) + ("\n" if lines else "")
        return Response(content=body, media_type="application/x-ndjson")

    @app.get("/images/{ref}")
    def image(ref: str):
        if blob_store is None:
            raise HTTPException(status_code=404, detail="no blob store configured")
        try:
            data = blob_store.get(ref)
        except ImageUnresolvableError:
            raise HTTPException(status_code=404, detail="unknown image")
        return Response(content=data, media_type="image/png")

    return app
