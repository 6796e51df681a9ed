"""Operator entry point.

Subcommands mirror the workflow end to end: validate-config, generate,
judge, metrics, benchmark, split, serve-annotation. One manifest file
configures everything; a few flags override per invocation. Exit codes:
0 success (per-sample failures are reported inline), 1 configuration
error, 2 run aborted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .annotation import AnnotationStore, create_app
from .backends import BackendRole
from .corpus import (
    BlobStore,
    DatasetRecord,
    assemble_benchmark,
    iter_dataset_dicts,
    split_records,
    write_benchmark,
)
from .errors import InterweaveError, ManifestError
from .judging import JudgeHarness, load_generator_outputs
from .manifest import RunManifest, build_gateway, load_generation_sources, load_manifest
from .metrics import (
    Report,
    ScoreSet,
    agreement_at,
    comparison_table,
    gap_distribution,
    gap_table,
    emit_report,
    load_score_records,
    mean_score,
    mean_variance_table,
    rmse,
    variance_score,
    write_score_records,
)
from .model import SCORE_DIMENSIONS
from .pipeline import GenerationConfig, GenerationRunner, RefinementPipeline
from .corpus import WorkSampler


def _info(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_validate_config(manifest: RunManifest, args) -> int:
    sections = [
        name
        for name in ("generate", "judge", "metrics", "benchmark", "split", "annotation")
        if getattr(manifest, name) is not None
    ]
    _info(f"manifest ok: run_id={manifest.run_id} seed={manifest.seed}")
    _info(f"backends: {sorted(manifest.backends)}")
    _info(f"sections: {sections}")
    return 0


def cmd_generate(manifest: RunManifest, args) -> int:
    section = manifest.section("generate")
    seed = args.seed if args.seed is not None else manifest.seed
    conversations = args.conversations or section.conversations
    workers = args.workers or section.workers
    output_dir = Path(args.output_dir) if args.output_dir else section.output_dir

    manifest = _with_seed(manifest, seed)
    gateway = build_gateway(manifest, blob_dir=output_dir / "blobs",
                            audit_path=_prepared(output_dir / "audit.jsonl"))
    from .backends import GenParams  # local import keeps CLI import light

    pipeline = RefinementPipeline(
        gateway=gateway,
        lm=manifest.backend(BackendRole.LM).profile(),
        vlm=manifest.backend(BackendRole.VLM).profile(),
        image_gen=manifest.backend(BackendRole.IMAGE).profile(),
        policy=section.policy,
        gen_params=GenParams(temperature=section.temperature, max_tokens=section.max_tokens),
        eval_params=GenParams(temperature=section.eval_temperature, max_tokens=section.max_tokens),
        strict_question_length=section.strict_question_length,
    )
    hierarchy, templates = load_generation_sources(section)
    sampler = WorkSampler(hierarchy, templates, seed)
    runner = GenerationRunner(
        pipeline=pipeline,
        sampler=sampler,
        config=GenerationConfig(
            run_id=manifest.run_id,
            seed=seed,
            conversations=conversations,
            turn_budget=section.turn_budget,
            workers=workers,
        ),
        output_dir=output_dir,
    )
    summary = runner.run(force=args.force)
    _info(f"dataset: {summary.dataset_path}")
    _info(f"conversations completed: {summary.completed}  failed: {summary.failed}")
    for stage, mean in sorted(summary.mean_refinements.items()):
        _info(f"mean {stage} refinements per turn: {mean:.2f}")
    if summary.interrupted:
        _info("run interrupted; rerun the same command to resume")
        return 2
    return 0


def cmd_judge(manifest: RunManifest, args) -> int:
    section = manifest.section("judge")
    gateway = build_gateway(manifest, blob_dir=section.blob_dir)
    judge_spec = manifest.backends.get(BackendRole.VLM.value) or manifest.backend(BackendRole.LM)
    harness = JudgeHarness(gateway, judge_spec.profile())
    outputs = load_generator_outputs(section.outputs)
    result = harness.judge_run(
        outputs,
        concurrency=section.concurrency,
        checkpoint_path=section.checkpoint,
    )
    write_score_records(result.records, section.scores_out)
    report = result.report()
    _info(f"scored: {report['scored']}  failed: {report['failed']}  "
          f"resumed: {report['skipped_resume']}")
    for sample_id, error in sorted(result.failures.items()):
        _info(f"  failure {sample_id}: {error}")
    for note in result.diagnostics:
        _info(f"  diagnostic: {note}")
    _info(f"scores written to {section.scores_out}")
    return 0


def cmd_metrics(manifest: RunManifest, args) -> int:
    section = manifest.section("metrics")
    model_set = ScoreSet.from_records(load_score_records(section.model_scores))
    human_set = ScoreSet.from_records(load_score_records(section.human_scores))

    rmse_by_dim, agreement_by_dim, gaps = {}, {}, {}
    for dim in SCORE_DIMENSIONS:
        rmse_by_dim[dim] = rmse(model_set, human_set, dim, section.allow_partial)
        agreement_by_dim[dim] = agreement_at(
            model_set, human_set, dim, section.tau, section.allow_partial
        )
        gaps[dim] = gap_distribution(model_set, human_set, dim, section.allow_partial)

    report = Report()
    report.add(comparison_table("judge_vs_human", rmse_by_dim, agreement_by_dim))
    report.add(gap_table("gap_distribution", {model_set.judge_id: gaps}))
    report.add(
        mean_variance_table(
            "model_judge_scores",
            {
                model_set.judge_id: {
                    dim: (mean_score(model_set, dim), variance_score(model_set, dim))
                    for dim in SCORE_DIMENSIONS
                }
            },
        )
    )
    paths = emit_report(report, section.out_dir)
    for dim in SCORE_DIMENSIONS:
        _info(
            f"{dim.upper()}: rmse={rmse_by_dim[dim]:.3f} "
            f"A@{section.tau}={agreement_by_dim[dim]:.3f}"
        )
    _info(f"report files: {', '.join(str(p) for p in paths)}")
    return 0


def _pool_questions(path: Path) -> list:
    """Generated-question pool: either a dataset from `generate` (first-turn
    questions, with topics) or a plain one-question-per-line text file."""
    if path.suffix == ".jsonl":
        rows = list(iter_dataset_dicts(path))
        if rows and "conversation" in rows[0]:
            pool = []
            for raw in rows:
                record = DatasetRecord.from_dict(raw)
                conv = record.conversation
                if conv.turns:
                    pool.append((conv.turns[0].question, conv.topic))
            return pool
        return [row["text"] for row in rows]
    return [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_benchmark(manifest: RunManifest, args) -> int:
    section = manifest.section("benchmark")
    human = [
        line
        for line in section.human_file.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    pool = _pool_questions(section.pool)
    benchmark = assemble_benchmark(human, pool, section.n_generated)
    if section.out.exists() and not args.force:
        raise ManifestError(f"{section.out} exists; pass --force to overwrite")
    write_benchmark(benchmark, section.out)
    counts = benchmark.source_counts()
    _info(f"benchmark written to {section.out}: {len(benchmark)} questions "
          f"({counts['human']} human, {counts['generated']} generated)")
    return 0


def cmd_split(manifest: RunManifest, args) -> int:
    section = manifest.section("split")
    fraction = args.train_fraction or section.train_fraction
    lines = [
        line
        for line in section.input.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    train, test = split_records(lines, fraction, manifest.seed)
    for out_path in (section.out_train, section.out_test):
        if out_path.exists() and not args.force:
            raise ManifestError(f"{out_path} exists; pass --force to overwrite")
    section.out_train.parent.mkdir(parents=True, exist_ok=True)
    section.out_train.write_text("\n".join(train) + ("\n" if train else ""), encoding="utf-8")
    section.out_test.write_text("\n".join(test) + ("\n" if test else ""), encoding="utf-8")
    _info(f"split {len(lines)} records into {len(train)} train / {len(test)} test")
    return 0


def cmd_serve_annotation(manifest: RunManifest, args) -> int:
    import uvicorn

    section = manifest.section("annotation")
    if not section.tokens:
        raise ManifestError("annotation.tokens must register at least one annotator")
    store = AnnotationStore(
        event_log_path=section.event_log,
        annotators=sorted(set(section.tokens.values())),
        assignees_per_task=section.assignees_per_task,
    )
    if section.outputs is not None:
        if not section.outputs.exists():
            raise ManifestError(f"annotation.outputs not found: {section.outputs}")
        created = store.load_tasks(load_generator_outputs(section.outputs))
        _info(f"loaded {created} new tasks from {section.outputs}")
    blob_store = BlobStore(section.blob_dir) if section.blob_dir else None
    app = create_app(store, dict(section.tokens), blob_store)
    port = args.port or section.port
    _info(f"annotation service on http://{section.host}:{port}")
    uvicorn.run(app, host=section.host, port=port, log_level="warning")
    return 0


def _with_seed(manifest: RunManifest, seed: int) -> RunManifest:
    if seed == manifest.seed:
        return manifest
    import dataclasses

    return dataclasses.replace(manifest, seed=seed)


def _prepared(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


COMMANDS = {
    "validate-config": cmd_validate_config,
    "generate": cmd_generate,
    "judge": cmd_judge,
    "metrics": cmd_metrics,
    "benchmark": cmd_benchmark,
    "split": cmd_split,
    "serve-annotation": cmd_serve_annotation,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interweave",
        description="Generate and evaluate interleaved image-text dialogue datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--manifest", "-m", required=True, help="path to the run manifest")
        cmd.add_argument("--force", action="store_true", help="overwrite existing outputs")
        if name == "generate":
            cmd.add_argument("--seed", type=int, default=None)
            cmd.add_argument("--conversations", type=int, default=None)
            cmd.add_argument("--workers", type=int, default=None)
            cmd.add_argument("--output-dir", default=None)
        if name == "split":
            cmd.add_argument("--train-fraction", type=float, default=None)
        if name == "serve-annotation":
            cmd.add_argument("--port", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = load_manifest(args.manifest)
        return COMMANDS[args.command](manifest, args)
    except ManifestError as exc:
        _info(f"config error: {exc}")
        return 1
    except InterweaveError as exc:
        _info(f"run aborted: {exc}")
        return 2
    except KeyboardInterrupt:
        _info("interrupted")
        return 2


if __name__ == "__main__":
    sys.exit(main())
