from .benchmark import (
    BenchmarkQuestion,
    BenchmarkSet,
    QuestionSource,
    assemble_benchmark,
    read_benchmark,
    split_records,
    write_benchmark,
)
from .blobs import BlobStore, blob_ref
from .dataset import (
    DatasetRecord,
    DatasetWriter,
    iter_dataset_dicts,
    read_dataset,
    repair_trailing_partial_line,
    write_json_atomic,
)
from .hierarchy import (
    Category,
    Domain,
    HierarchyCounts,
    TopicHierarchy,
    hierarchy_from_mapping,
    load_topic_hierarchy,
    packaged_hierarchy,
)
from .registry import (
    WorkSampler,
    derive_seed,
    load_templates,
    packaged_templates,
    sample_work_item,
    templates_from_lines,
)

__all__ = [
    "BenchmarkQuestion",
    "BenchmarkSet",
    "BlobStore",
    "Category",
    "DatasetRecord",
    "DatasetWriter",
    "Domain",
    "HierarchyCounts",
    "QuestionSource",
    "TopicHierarchy",
    "WorkSampler",
    "assemble_benchmark",
    "blob_ref",
    "derive_seed",
    "hierarchy_from_mapping",
    "iter_dataset_dicts",
    "load_templates",
    "load_topic_hierarchy",
    "packaged_hierarchy",
    "packaged_templates",
    "read_benchmark",
    "read_dataset",
    "repair_trailing_partial_line",
    "sample_work_item",
    "split_records",
    "templates_from_lines",
    "write_benchmark",
    "write_json_atomic",
]
