from enum import Enum


class LowerCaseEnum(Enum):
    """
    Enum whose values are the lower case, hyphenated names used on the command line.
    """

    @classmethod
    def fromString(cls, s: str):
        u = s.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == u:
                return member
        raise KeyError(f"{s} is not a member of Enum ({', '.join(cls.list())})")

    @classmethod
    def list(cls):
        return list(map(lambda c: c.value, cls))
