from .error import (  # noqa: F401
    EvaluatorCount,
    InvalidPersona,
    InvalidSample,
    MalformedOutput,
    QAError,
    UnknownPersona,
)
from .generate import (  # noqa: F401
    CategoryShare,
    GenerationResult,
    GenerationStats,
    SceneContext,
    category_report,
    choose_targets,
    diversify,
    generate_samples,
    sample_id,
)
from .model import (  # noqa: F401
    DefectClass,
    DefectReport,
    Demonstration,
    Persona,
    QASample,
    QCStatus,
    load_personas,
    select_personas,
)
from .parse import parse_defects, parse_paraphrases, parse_tagged_qa  # noqa: F401
from .prompt import (  # noqa: F401
    build_diversify_prompt,
    build_generation_prompt,
    build_quality_prompt,
)
from .quality import (  # noqa: F401
    LOCAL_EVALUATOR,
    aggregate_verdicts,
    lexical_precheck,
    quality_check,
    run_quality_control,
)
