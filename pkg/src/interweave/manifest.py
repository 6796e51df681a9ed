"""Run manifest: one structured config file driving every CLI command.

The manifest is YAML (or JSON, which YAML subsumes). Unknown keys are
rejected outright, credentials are referenced only by environment-variable
name, and relative paths resolve against the manifest's own directory.
Validation happens fully before any network call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from .backends import (
    AuditLog,
    BackendKind,
    BackendProfile,
    BackendRole,
    Gateway,
    HttpTransport,
    RetryPolicy,
    transport_for_script,
)
from .corpus import BlobStore, load_templates, load_topic_hierarchy, packaged_hierarchy, packaged_templates
from .errors import ManifestError
from .pipeline import RefinementPolicy


def _take(data: Mapping[str, Any], allowed: set[str], where: str) -> dict:
    if not isinstance(data, Mapping):
        raise ManifestError(f"{where} must be a mapping")
    unknown = set(data) - allowed
    if unknown:
        raise ManifestError(f"unknown keys in {where}: {sorted(unknown)}")
    return dict(data)


def _require(data: Mapping[str, Any], key: str, where: str):
    if key not in data or data[key] is None:
        raise ManifestError(f"{where} is missing required key {key!r}")
    return data[key]


@dataclass(frozen=True)
class BackendSpec:
    role: BackendRole
    kind: BackendKind
    model_name: str
    endpoint_url: str | None = None
    auth_env_var: str | None = None
    script: str | None = None
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    rate_limit_rpm: int = 0

    @classmethod
    def parse(cls, data: Mapping[str, Any], role: BackendRole, where: str) -> "BackendSpec":
        data = _take(
            data,
            {"kind", "model_name", "endpoint_url", "auth_env_var", "script", "retry", "rate_limit_rpm"},
            where,
        )
        try:
            kind = BackendKind(_require(data, "kind", where))
        except ValueError as exc:
            raise ManifestError(f"{where}: {exc}") from None
        retry_data = _take(
            data.get("retry") or {},
            {"max_attempts", "backoff_base_ms", "backoff_cap_ms"},
            f"{where}.retry",
        )
        try:
            spec = cls(
                role=role,
                kind=kind,
                model_name=str(_require(data, "model_name", where)),
                endpoint_url=data.get("endpoint_url"),
                auth_env_var=data.get("auth_env_var"),
                script=data.get("script"),
                retry=RetryPolicy(**retry_data),
                rate_limit_rpm=int(data.get("rate_limit_rpm") or 0),
            )
            spec.profile()  # surface constraint violations now
        except (ValueError, TypeError) as exc:
            raise ManifestError(f"{where}: {exc}") from None
        return spec

    def profile(self) -> BackendProfile:
        return BackendProfile(
            role=self.role,
            kind=self.kind,
            model_name=self.model_name,
            endpoint_url=self.endpoint_url,
            auth_env_var=self.auth_env_var,
            retry=self.retry,
            rate_limit_rpm=self.rate_limit_rpm,
            script=self.script,
        )


@dataclass(frozen=True)
class GenerateSection:
    conversations: int = 5
    turn_budget: int = 3
    workers: int = 1
    policy: RefinementPolicy = field(default_factory=RefinementPolicy)
    output_dir: Path = Path("runs/out")
    topics: Path | None = None
    templates: Path | None = None
    temperature: float = 0.7
    eval_temperature: float = 0.0
    max_tokens: int = 1024
    strict_question_length: bool = False


@dataclass(frozen=True)
class JudgeSection:
    outputs: Path
    scores_out: Path
    checkpoint: Path | None = None
    concurrency: int = 1
    blob_dir: Path | None = None


@dataclass(frozen=True)
class MetricsSection:
    model_scores: Path
    human_scores: Path
    out_dir: Path
    tau: int = 1
    allow_partial: bool = False


@dataclass(frozen=True)
class BenchmarkSection:
    human_file: Path
    pool: Path
    out: Path
    n_generated: int = 3500


@dataclass(frozen=True)
class SplitSection:
    input: Path
    out_train: Path
    out_test: Path
    train_fraction: float = 0.8


@dataclass(frozen=True)
class AnnotationSection:
    event_log: Path
    outputs: Path | None = None
    tokens: Mapping[str, str] = field(default_factory=dict)
    host: str = "127.0.0.1"
    port: int = 8377
    assignees_per_task: int = 2
    blob_dir: Path | None = None


@dataclass(frozen=True)
class RunManifest:
    run_id: str
    seed: int
    backends: Mapping[str, BackendSpec]
    generate: GenerateSection | None = None
    judge: JudgeSection | None = None
    metrics: MetricsSection | None = None
    benchmark: BenchmarkSection | None = None
    split: SplitSection | None = None
    annotation: AnnotationSection | None = None

    def backend(self, role: BackendRole) -> BackendSpec:
        spec = self.backends.get(role.value)
        if spec is None:
            raise ManifestError(f"manifest defines no {role.value} backend")
        return spec

    def section(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise ManifestError(f"manifest has no `{name}` section")
        return value


_TOP_KEYS = {"run_id", "seed", "backends", "generate", "judge", "metrics", "benchmark", "split", "annotation"}


def load_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}")
    except yaml.YAMLError as exc:
        raise ManifestError(f"manifest is not valid YAML: {exc}")
    if not isinstance(raw, Mapping):
        raise ManifestError("manifest top level must be a mapping")
    return parse_manifest(raw, base_dir=path.parent)


def parse_manifest(raw: Mapping[str, Any], base_dir: Path) -> RunManifest:
    data = _take(raw, _TOP_KEYS, "manifest")

    def respath(value, where) -> Path:
        if not isinstance(value, (str, Path)):
            raise ManifestError(f"{where} must be a path string")
        p = Path(value)
        return p if p.is_absolute() else base_dir / p

    backends_raw = _take(_require(data, "backends", "manifest"), {"lm", "vlm", "image"}, "backends")
    backends = {}
    for role in BackendRole:
        if role.value in backends_raw:
            backends[role.value] = BackendSpec.parse(
                backends_raw[role.value], role, f"backends.{role.value}"
            )

    generate = None
    if data.get("generate") is not None:
        g = _take(
            data["generate"],
            {"conversations", "turn_budget", "workers", "policy", "output_dir", "topics",
             "templates", "temperature", "eval_temperature", "max_tokens",
             "strict_question_length"},
            "generate",
        )
        policy_raw = _take(g.get("policy") or {}, {"qr", "ar", "ir"}, "generate.policy")
        try:
            policy = RefinementPolicy(
                k_qr=int(policy_raw.get("qr", 3)),
                k_ar=int(policy_raw.get("ar", 3)),
                k_ir=int(policy_raw.get("ir", 3)),
            )
        except ValueError as exc:
            raise ManifestError(f"generate.policy: {exc}") from None
        generate = GenerateSection(
            conversations=int(g.get("conversations", 5)),
            turn_budget=int(g.get("turn_budget", 3)),
            workers=int(g.get("workers", 1)),
            policy=policy,
            output_dir=respath(_require(g, "output_dir", "generate"), "generate.output_dir"),
            topics=respath(g["topics"], "generate.topics") if g.get("topics") else None,
            templates=respath(g["templates"], "generate.templates") if g.get("templates") else None,
            temperature=float(g.get("temperature", 0.7)),
            eval_temperature=float(g.get("eval_temperature", 0.0)),
            max_tokens=int(g.get("max_tokens", 1024)),
            strict_question_length=bool(g.get("strict_question_length", False)),
        )
        if generate.conversations < 1 or generate.turn_budget < 1 or generate.workers < 1:
            raise ManifestError("generate: conversations, turn_budget and workers must be >= 1")

    judge = None
    if data.get("judge") is not None:
        j = _take(
            data["judge"], {"outputs", "scores_out", "checkpoint", "concurrency", "blob_dir"}, "judge"
        )
        judge = JudgeSection(
            outputs=respath(_require(j, "outputs", "judge"), "judge.outputs"),
            scores_out=respath(_require(j, "scores_out", "judge"), "judge.scores_out"),
            checkpoint=respath(j["checkpoint"], "judge.checkpoint") if j.get("checkpoint") else None,
            concurrency=int(j.get("concurrency", 1)),
            blob_dir=respath(j["blob_dir"], "judge.blob_dir") if j.get("blob_dir") else None,
        )

    metrics = None
    if data.get("metrics") is not None:
        m = _take(
            data["metrics"],
            {"model_scores", "human_scores", "out_dir", "tau", "allow_partial"},
            "metrics",
        )
        metrics = MetricsSection(
            model_scores=respath(_require(m, "model_scores", "metrics"), "metrics.model_scores"),
            human_scores=respath(_require(m, "human_scores", "metrics"), "metrics.human_scores"),
            out_dir=respath(_require(m, "out_dir", "metrics"), "metrics.out_dir"),
            tau=int(m.get("tau", 1)),
            allow_partial=bool(m.get("allow_partial", False)),
        )

    benchmark = None
    if data.get("benchmark") is not None:
        b = _take(data["benchmark"], {"human_file", "pool", "out", "n_generated"}, "benchmark")
        benchmark = BenchmarkSection(
            human_file=respath(_require(b, "human_file", "benchmark"), "benchmark.human_file"),
            pool=respath(_require(b, "pool", "benchmark"), "benchmark.pool"),
            out=respath(_require(b, "out", "benchmark"), "benchmark.out"),
            n_generated=int(b.get("n_generated", 3500)),
        )

    split = None
    if data.get("split") is not None:
        s = _take(data["split"], {"input", "out_train", "out_test", "train_fraction"}, "split")
        split = SplitSection(
            input=respath(_require(s, "input", "split"), "split.input"),
            out_train=respath(_require(s, "out_train", "split"), "split.out_train"),
            out_test=respath(_require(s, "out_test", "split"), "split.out_test"),
            train_fraction=float(s.get("train_fraction", 0.8)),
        )
        if not 0 < split.train_fraction < 1:
            raise ManifestError("split.train_fraction must be strictly between 0 and 1")

    annotation = None
    if data.get("annotation") is not None:
        a = _take(
            data["annotation"],
            {"event_log", "outputs", "tokens", "host", "port", "assignees_per_task", "blob_dir"},
            "annotation",
        )
        tokens = a.get("tokens") or {}
        if not isinstance(tokens, Mapping) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in tokens.items()
        ):
            raise ManifestError("annotation.tokens must map token strings to annotator ids")
        annotation = AnnotationSection(
            event_log=respath(_require(a, "event_log", "annotation"), "annotation.event_log"),
            outputs=respath(a["outputs"], "annotation.outputs") if a.get("outputs") else None,
            tokens=dict(tokens),
            host=str(a.get("host", "127.0.0.1")),
            port=int(a.get("port", 8377)),
            assignees_per_task=int(a.get("assignees_per_task", 2)),
            blob_dir=respath(a["blob_dir"], "annotation.blob_dir") if a.get("blob_dir") else None,
        )

    try:
        run_id = str(_require(data, "run_id", "manifest"))
        seed = int(_require(data, "seed", "manifest"))
    except (TypeError, ValueError) as exc:
        raise ManifestError(f"manifest: {exc}") from None

    return RunManifest(
        run_id=run_id,
        seed=seed,
        backends=backends,
        generate=generate,
        judge=judge,
        metrics=metrics,
        benchmark=benchmark,
        split=split,
        annotation=annotation,
    )


class _RoutingTransport:
    """Dispatches per profile: scripted backends stay in-process, HTTP kinds
    share one real transport."""

    def __init__(self, seed: int):
        self.seed = seed
        self._http = HttpTransport()
        self._scripted: dict[str, Any] = {}

    def _resolve(self, profile: BackendProfile):
        if profile.kind is BackendKind.SCRIPTED:
            if profile.script not in self._scripted:
                self._scripted[profile.script] = transport_for_script(profile.script, self.seed)
            return self._scripted[profile.script]
        return self._http

    def chat(self, profile, exchange, resolve_image):
        return self._resolve(profile).chat(profile, exchange, resolve_image)

    def generate_image(self, profile, caption, size):
        return self._resolve(profile).generate_image(profile, caption, size)


def build_gateway(
    manifest: RunManifest,
    blob_dir: Path | None,
    audit_path: Path | None = None,
    clock=None,
) -> Gateway:
    transport = _RoutingTransport(manifest.seed)
    kwargs = {}
    if clock is not None:
        kwargs["clock"] = clock
    return Gateway(
        transport=transport,
        blob_store=BlobStore(blob_dir) if blob_dir else None,
        audit_log=AuditLog(audit_path) if audit_path else AuditLog(),
        **kwargs,
    )


def load_generation_sources(section: GenerateSection):
    hierarchy = load_topic_hierarchy(section.topics) if section.topics else packaged_hierarchy()
    templates = load_templates(section.templates) if section.templates else packaged_templates()
    return hierarchy, templates
