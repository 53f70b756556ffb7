"""Exception types raised by the pipeline stages.

Everything derived from :class:`DataError` represents bad input data; the CLI
maps those to exit code 2.
"""


class ContextTreeError(Exception):
    pass


class DataError(ContextTreeError):
    pass


class EmptyFile(DataError):
    def __init__(self, path):
        super().__init__(f"{path}: file contains no records")
        self.path = path


class MalformedRecord(DataError):
    def __init__(self, line, reason="", path=None):
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: malformed record" + (f" ({reason})" if reason else ""))
        self.line = line
        self.path = path


class DuplicateId(DataError):
    def __init__(self, element_id):
        super().__init__(f"duplicate element id {element_id!r}")
        self.element_id = element_id


class MalformedGeometry(DataError):
    def __init__(self, element_id, reason=""):
        super().__init__(f"element {element_id!r}: malformed geometry" + (f" ({reason})" if reason else ""))
        self.element_id = element_id


class TaxonomyError(DataError):
    pass


class CycleDetected(TaxonomyError):
    def __init__(self, words):
        super().__init__("taxonomy contains a cycle through: " + ", ".join(sorted(words)))
        self.words = words


class MultipleRoots(TaxonomyError):
    def __init__(self, roots):
        super().__init__("taxonomy has more than one root: " + ", ".join(sorted(roots)))
        self.roots = roots


class UnknownParent(TaxonomyError):
    def __init__(self, word, parent):
        super().__init__(f"word {word!r} refers to unknown parent {parent!r}")
        self.word = word
        self.parent = parent


class EmptyTagSet(ContextTreeError):
    pass


class AllZero(ContextTreeError):
    """Every score in a filter window is zero."""


class EmptyTestDay(DataError):
    def __init__(self, day):
        super().__init__(f"test day {day} contains no elements")
        self.day = day


class NoInteractions(DataError):
    """Filtering left no element to build a tree from."""

    def __init__(self):
        super().__init__("no element interactions survived filtering; try a lower t or larger delta")
