import enum
import functools


class MixedEnumMeta(enum.EnumMeta):

    # note: override only necessary prior to Python 3.12
    def __contains__(cls, obj):
        if not isinstance(obj, enum.Enum):
            return any(obj == member.value for member in cls)

        return super().__contains__(obj)


class MixedEnum(enum.Enum, metaclass=MixedEnumMeta):
    pass


class StrEnum(str, MixedEnum):
    """String-valued enumeration whose members print (and serialize)
    as their values.

    """
    def __str__(self):
        return str(self.value)

    @classmethod
    def parse(cls, value):
        """Retrieve member by value or by name."""
        if isinstance(value, cls):
            return value

        try:
            return cls(value)
        except ValueError:
            try:
                return cls[value]
            except KeyError:
                choices = ', '.join(member.value for member in cls)
                raise ValueError(f"{value!r} is not a valid {cls.__name__} "
                                 f"(choose from: {choices})") from None


class CallableEnum(enum.Enum):
    """Enumeration of functions, each member callable in place of its
    value.

    """
    @staticmethod
    def member(func):
        return callable_member(func)

    def __call__(self, *args, **kwargs):
        return self.value(*args, **kwargs)


class callable_member:

    def __init__(self, func):
        functools.update_wrapper(self, func)
        self.__func__ = func

    def __call__(self, *args, **kwargs):
        return self.__func__(*args, **kwargs)


class FileFormatEnum(enum.Enum):

    @property
    def suffix(self):
        return f'.{self.name}'

    @classmethod
    def for_path(cls, path):
        suffix = path.suffix.lower()

        for member in cls:
            if member.suffix == suffix or (member.name == 'yaml' and suffix == '.yml'):
                return member

        raise LookupError(suffix)
