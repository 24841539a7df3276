from .error import (  # noqa: F401
    DegenerateVector,
    EmptyText,
    EvaluationError,
    JudgeOutputError,
    MissingField,
    MissingJustification,
    OutOfRange,
)
from .judge import (  # noqa: F401
    JudgeScore,
    MeanScores,
    ParsedJudgement,
    aggregate_scores,
    build_judge_prompt,
    display_score,
    format_judge_output,
    parse_judge_output,
)
from .metrics import (  # noqa: F401
    METEOR_VARIANT,
    align,
    bleu4,
    count_chunks,
    lcs_length,
    meteor_lite,
    rouge_l,
    tokenize,
)
from .report import (  # noqa: F401
    EvaluationReport,
    build_answer_prompt,
    evaluate_samples,
    evaluator_correlation,
    format_summary,
    read_predictions,
    summarize,
)
