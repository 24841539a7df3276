"""Staged, resumable orchestration of the dataset and evaluation
pipeline.

Stages (see `steps`) are registered in dependency order; the runner
records each stage's input key and output digests in the run manifest
(`manifest.json` of the output directory).

"""
from .error import ConfigInvalid, PipelineError, StageFailed, StageMissing  # noqa: F401
from .manifest import (  # noqa: F401
    MANIFEST_NAME,
    RunManifest,
    StageRecord,
    StageStatus,
    load_manifest,
)
from .stage import ordered, plan, registry  # noqa: F401
from .steps import StageOutput, dataset_counts  # noqa: F401
from .runner import (  # noqa: F401
    GatewayMode,
    GatewaySet,
    PipelineRunner,
    StageContext,
    StageEvent,
    run_pipeline,
)
from .report import format_categories, report  # noqa: F401
