"""Text similarity metrics over one shared tokenization."""
import collections
import functools
import math
import re
import typing

from nltk.stem.porter import PorterStemmer

from .error import EmptyText


#: Smoothing numerator of n-gram orders without any match.
BLEU_EPSILON = 1e-9

#: METEOR variant implemented: exact and stem matching, no synonyms.
METEOR_VARIANT = 'meteor_lite (exact + Porter stem matching, no synonym stage)'

_TOKEN = re.compile(r'\w+|[^\w\s]')


def tokenize(text) -> typing.List[str]:
    """Lowercased word and punctuation tokens."""
    return _TOKEN.findall(text.lower())


def _tokens(name, text):
    tokens = tokenize(text)

    if not tokens:
        raise EmptyText(f'{name} is empty after tokenization')

    return tokens


def _ngrams(tokens, n):
    return collections.Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu4(candidate, references) -> float:
    """Sentence BLEU-4: geometric mean of clipped 1- to 4-gram
    precisions, times the brevity penalty.

    An order without any clipped match contributes ε / (its n-gram
    count), so short candidates score near zero rather than zero.

    """
    if isinstance(references, str):
        references = [references]

    hypothesis = _tokens('candidate', candidate)
    refs = [tokenize(reference) for reference in references]
    refs = [ref for ref in refs if ref]

    if not refs:
        raise EmptyText('no reference is non-empty after tokenization')

    log_precision = 0.0

    for n in range(1, 5):
        counts = _ngrams(hypothesis, n)
        maximum = collections.Counter()

        for ref in refs:
            maximum |= _ngrams(ref, n)

        total = sum(counts.values())
        matches = sum(min(count, maximum[gram]) for (gram, count) in counts.items())

        precision = matches / total if matches else BLEU_EPSILON / max(1, total)
        log_precision += math.log(precision) / 4

    length = len(hypothesis)
    # closest reference length; ties to the shorter
    closest = min((len(ref) for ref in refs), key=lambda size: (abs(size - length), size))
    brevity = 1.0 if length > closest else math.exp(1 - closest / length)

    return min(1.0, brevity * math.exp(log_precision))


def lcs_length(a, b) -> int:
    previous = [0] * (len(b) + 1)

    for token in a:
        current = [0]

        for (j, other) in enumerate(b, 1):
            current.append(previous[j - 1] + 1 if token == other
                           else max(previous[j], current[j - 1]))

        previous = current

    return previous[-1]


def rouge_l(candidate, reference) -> float:
    """F1 of the longest common subsequence."""
    hypothesis = _tokens('candidate', candidate)
    ref = _tokens('reference', reference)

    lcs = lcs_length(hypothesis, ref)

    if lcs == 0:
        return 0.0

    precision = lcs / len(hypothesis)
    recall = lcs / len(ref)
    return 2 * precision * recall / (precision + recall)


_stemmer = PorterStemmer()


@functools.lru_cache(maxsize=4096)
def stem(token) -> str:
    return _stemmer.stem(token)


def align(hypothesis, reference) -> typing.List[typing.Tuple[int, int]]:
    """Unigram alignment: exact matches first, then stem matches among
    the remainder.

    Each candidate token takes the unmatched reference token extending
    its predecessor's match where there is one, otherwise the leftmost.

    """
    matched = {}
    used = set()

    for form in (lambda token: token, stem):
        reference_forms = [form(token) for token in reference]
        previous = None

        for (i, token) in enumerate(hypothesis):
            if i in matched:
                previous = matched[i]
                continue

            key = form(token)
            options = [j for (j, other) in enumerate(reference_forms)
                       if other == key and j not in used]

            if not options:
                previous = None
                continue

            j = previous + 1 if previous is not None and previous + 1 in options else options[0]
            matched[i] = j
            used.add(j)
            previous = j

    return sorted(matched.items())


def count_chunks(alignment) -> int:
    chunks = 0
    last = None

    for (i, j) in alignment:
        if last is None or (i, j) != (last[0] + 1, last[1] + 1):
            chunks += 1

        last = (i, j)

    return chunks


def meteor_lite(candidate, reference) -> float:
    """METEOR without the synonym stage.

    F_mean = 10PR / (R + 9P); penalty = 0.5 (chunks / matches)³;
    score = F_mean (1 − penalty).

    """
    hypothesis = _tokens('candidate', candidate)
    ref = _tokens('reference', reference)

    alignment = align(hypothesis, ref)
    matches = len(alignment)

    if matches == 0:
        return 0.0

    precision = matches / len(hypothesis)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (count_chunks(alignment) / matches) ** 3

    return f_mean * (1 - penalty)
