"""Identifiers and content digests."""
import hashlib
import itertools
import pathlib
import string
import time
import typing


_counter = itertools.cycle(range(100))


def int_to_id(num, alphabet=(string.digits + string.ascii_letters)):
    """Translate a given integer to the base of a given alphabet."""
    if num == 0:
        return alphabet[0]

    base = len(alphabet)

    result = ''

    while num:
        (num, pos) = divmod(num, base)
        result = alphabet[pos] + result

    return result


def event_id():
    """Generate a short, approximately-unique alphanumeric identifier.

    The identifier derives from the epoch time in nanoseconds plus a
    cyclic counter (to avoid sub-nanosecond collision). It is intended
    for log events within a single process; it is *not* reproducible.

    """
    return int_to_id(100 * time.time_ns() + next(_counter))


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_text(text: str) -> str:
    return digest_bytes(text.encode('utf-8'))


def digest_file(path: typing.Union[str, pathlib.Path]) -> str:
    hasher = hashlib.sha256()

    with open(path, 'rb') as fd:
        for chunk in iter(lambda: fd.read(1 << 16), b''):
            hasher.update(chunk)

    return hasher.hexdigest()


def derive_seed(*parts) -> int:
    """Derive a 64-bit integer seed from the string forms of `parts`.

    Unlike `hash()`, the result is stable across processes and hosts.

    """
    material = '\x1f'.join(str(part) for part in parts)
    return int.from_bytes(hashlib.sha256(material.encode('utf-8')).digest()[:8], 'big')
