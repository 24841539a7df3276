"""Prompt construction from the packaged template table."""
import functools
import pathlib

from cityqa import conf
from cityqa.gateway import CompletionRequest, ImagePart, TextPart
from cityqa.taxonomy import TaskCategory


@functools.lru_cache(maxsize=None)
def prompt_templates():
    return conf.load_table('templates')


def _image_part(image):
    if isinstance(image, ImagePart):
        return image

    if isinstance(image, (str, pathlib.Path)):
        return ImagePart.from_path(image)

    raise TypeError(f'expected ImagePart or path not {image.__class__.__name__}')


def build_generation_prompt(task, persona, attributes, images, n_pairs, *, model_id,
                            temperature=0.7, max_output_tokens=1024) -> CompletionRequest:
    """Request for `n_pairs` tag-delimited QA pairs of `task`, voiced by
    `persona` and grounded in `attributes` (and attached `images`).

    The text holds, in order: role and style directive, few-shot
    demonstrations, scene attributes, the instruction rules (diversity,
    truthfulness, format, contextual simulation) and the pair count.

    """
    if n_pairs < 1:
        raise ValueError(f'n_pairs must be at least 1 not {n_pairs!r}')

    attributes = list(attributes)

    if not attributes:
        raise ValueError('generation prompt requires scene attributes')

    task = TaskCategory.parse(task)
    images = [_image_part(image) for image in images]
    templates = prompt_templates()['generate']

    text = conf.render_template(
        templates['user'],
        persona={
            'name': persona.name,
            'article': persona.article,
            'style': persona.style,
            'few_shot': [example._asdict() for example in persona.few_shot],
        },
        task={'title': task.display_name, 'directive': task.directive},
        attributes=[str(attribute) for attribute in attributes],
        n_images=len(images),
        n_pairs=n_pairs,
    )

    return CompletionRequest(
        model_id,
        templates['system'],
        (TextPart(text.strip()), *images),
        temperature,
        max_output_tokens,
    )


def build_diversify_prompt(question, n, *, model_id, temperature=0.7,
                           max_output_tokens=512) -> CompletionRequest:
    templates = prompt_templates()['diversify']
    text = conf.render_template(templates['user'], question=question, n=n)
    return CompletionRequest(model_id, templates['system'], (TextPart(text.strip()),),
                             temperature, max_output_tokens)


def build_quality_prompt(sample, attributes, *, model_id, max_output_tokens=512):
    templates = prompt_templates()['quality']
    text = conf.render_template(
        templates['user'],
        attributes=[str(attribute) for attribute in attributes],
        question=sample.question,
        answer=sample.answer,
    )
    return CompletionRequest(model_id, templates['system'], (TextPart(text.strip()),),
                             0.0, max_output_tokens)
