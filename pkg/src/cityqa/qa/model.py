import typing
from dataclasses import dataclass, field, replace

from cityqa import conf
from cityqa.attribute import AttributeText
from cityqa.taxonomy import TaskCategory
from cityqa.util.enum import StrEnum

from .error import InvalidPersona, InvalidSample, UnknownPersona


class QCStatus(StrEnum):

    pending = 'pending'
    kept = 'kept'
    rejected = 'rejected'


class DefectClass(StrEnum):

    TemplateArtifact = 'TemplateArtifact'
    PrivacyRisk = 'PrivacyRisk'
    AmbiguousQuestion = 'AmbiguousQuestion'
    UninformativeAnswer = 'UninformativeAnswer'
    SceneInconsistency = 'SceneInconsistency'


@dataclass(frozen=True)
class DefectReport:

    evaluator: str
    defect_class: DefectClass
    rationale: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'defect_class', DefectClass.parse(self.defect_class))

    def to_dict(self):
        return {'evaluator': self.evaluator,
                'defect_class': self.defect_class.value,
                'rationale': self.rationale}

    @classmethod
    def from_dict(cls, data):
        return cls(data['evaluator'], data['defect_class'], data.get('rationale', ''))


class Demonstration(typing.NamedTuple):

    question: str
    answer: str


@dataclass(frozen=True)
class Persona:

    name: str
    style: str
    few_shot: typing.Tuple[Demonstration, ...]
    article: str = 'a'

    def __post_init__(self):
        few_shot = tuple(Demonstration(*example) for example in self.few_shot)

        if not few_shot:
            raise InvalidPersona(f'persona {self.name!r} requires at least one few-shot example')

        if not self.name or not self.style:
            raise InvalidPersona('persona requires a name and a style directive')

        object.__setattr__(self, 'few_shot', few_shot)


def load_personas(table=None) -> typing.Dict[str, Persona]:
    """Personas by name, from the packaged persona table (or `table`)."""
    table = conf.load_table('personas') if table is None else table

    return {
        entry['name']: Persona(
            entry['name'],
            entry['style'],
            tuple((example['question'], example['answer']) for example in entry['few_shot']),
            entry.get('article', 'a'),
        )
        for entry in table.get('persona', ())
    }


def select_personas(names, personas=None) -> typing.List[Persona]:
    personas = load_personas() if personas is None else personas

    try:
        return [personas[name] for name in names]
    except KeyError as exc:
        raise UnknownPersona(exc.args[0], personas) from None


@dataclass(frozen=True)
class QASample:
    """A generated question-answer pair and its provenance.

    `evidence` holds the attribute texts the pair was generated from;
    `source` the sample_id of the question a paraphrase was derived from.

    """
    sample_id: str
    task: TaskCategory
    question: str
    answer: str
    scene_id: str
    target_ids: typing.Tuple[int, ...]
    persona: str
    generator: str
    qc_status: QCStatus = QCStatus.pending
    defects: typing.Tuple[DefectReport, ...] = ()
    evidence: typing.Tuple[AttributeText, ...] = field(default=(), repr=False)
    source: typing.Optional[str] = None

    def __post_init__(self):
        task = TaskCategory.parse(self.task)
        targets = tuple(int(target) for target in self.target_ids)

        if not self.question.strip() or not self.answer.strip():
            raise InvalidSample(f'{self.sample_id}: question and answer must be non-empty')

        if task.level.takes_targets and not targets:
            raise InvalidSample(f'{self.sample_id}: {task} requires target objects')

        if not task.level.takes_targets and targets:
            raise InvalidSample(f'{self.sample_id}: {task} takes no target objects')

        object.__setattr__(self, 'task', task)
        object.__setattr__(self, 'target_ids', targets)
        object.__setattr__(self, 'qc_status', QCStatus.parse(self.qc_status))
        object.__setattr__(self, 'defects', tuple(self.defects))
        object.__setattr__(self, 'evidence', tuple(self.evidence))

    def with_verdict(self, status, defects) -> 'QASample':
        return replace(self, qc_status=status, defects=tuple(defects))

    def to_dict(self):
        return {
            'sample_id': self.sample_id,
            'task': self.task.value,
            'question': self.question,
            'answer': self.answer,
            'scene_id': self.scene_id,
            'target_ids': list(self.target_ids),
            'persona': self.persona,
            'generator': self.generator,
            'qc_status': self.qc_status.value,
            'defects': [defect.to_dict() for defect in self.defects],
            'evidence': [attribute.to_dict() for attribute in self.evidence],
            'source': self.source,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data['sample_id'],
            data['task'],
            data['question'],
            data['answer'],
            data['scene_id'],
            tuple(data.get('target_ids', ())),
            data['persona'],
            data['generator'],
            data.get('qc_status', QCStatus.pending),
            tuple(DefectReport.from_dict(defect) for defect in data.get('defects', ())),
            tuple(AttributeText.from_dict(item) for item in data.get('evidence', ())),
            data.get('source'),
        )
