import re

from cityqa.gateway import CallableTransport, CompletionResponse, FinishReason, Usage
from cityqa.qa.prompt import prompt_templates
from cityqa.util.ident import digest_text


class ScriptedModel:
    """Deterministic stand-in for every completion provider of the
    pipeline, answering by the prompt's kind (its system text).

    `defects` maps model ids to the defect lines that reviewer reports;
    `scores` maps model ids to the (logicality, reliability) that judge
    awards; otherwise judges score by a digest of the prompt and their id
    (in [5, 10), varying by sample and by judge).

    """
    pairs_pattern = re.compile(r'Generate exactly (\d+) question-answer pairs')
    variants_pattern = re.compile(r'in (\d+) different phrasings')
    question_pattern = re.compile(r'^Question: (.*)$', re.MULTILINE)

    def __init__(self, defects=None, scores=None):
        self.defects = defects or {}
        self.scores = scores or {}
        self.requests = []

    def kind(self, request):
        for (kind, templates) in prompt_templates().items():
            if isinstance(templates, dict) and templates.get('system') == request.system_text:
                return kind

        raise LookupError(f'unrecognized prompt: {request.system_text!r}')

    def __call__(self, request):
        self.requests.append(request)
        text = request.text
        tag = digest_text(text)[:6]

        kind = self.kind(request)

        if kind == 'generate':
            count = int(self.pairs_pattern.search(text).group(1))
            reply = ''.join(
                f'<Question>What stands near landmark {tag} (item {index})?</Question>'
                f'<Answer>The parking lot lies to the northeast of item {index}.</Answer>\n'
                for index in range(count)
            )
        elif kind == 'diversify':
            count = int(self.variants_pattern.search(text).group(1))
            question = self.question_pattern.search(text).group(1)
            reply = '\n'.join(f'{index}. Put another way ({index}): {question}'
                              for index in range(1, count + 1))
        elif kind == 'quality':
            reply = '\n'.join(self.defects.get(request.model_id, ())) or 'No defects'
        elif kind == 'judge':
            (logicality, reliability) = (self.scores.get(request.model_id) or
                                         self.judge_scores(request))
            reply = (f'Logicality: {logicality}\nReliability: {reliability}\n'
                     'Justification: consistent with the evidence.')
        else:
            reply = 'The parking lot lies to the northeast.'

        return CompletionResponse(reply, FinishReason.stop, Usage(len(text) // 4, len(reply) // 4))

    @staticmethod
    def judge_scores(request):
        digest = digest_text(f'{request.model_id}\n{request.text}')
        return (5 + int(digest[:4], 16) % 50 / 10, 5 + int(digest[4:8], 16) % 50 / 10)

    def transport(self, _entry=None):
        return CallableTransport(self)
