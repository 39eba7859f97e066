"""
Exception hierarchy and exit-code mapping
"""

from typing import Optional


EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_BOUND = 3


class CNGroupsError(Exception):
    """Base class for every error raised by the library"""


class InputError(CNGroupsError, ValueError):
    """Malformed input: specs, cycle strings, inconsistent degrees"""


class DegreeMismatchError(InputError):
    pass


class CycleSyntaxError(InputError):
    """Cycle notation that cannot be parsed; position is a 0-based offset"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SpecError(InputError):
    """Group spec schema violation naming the offending field"""

    def __init__(self, message: str, field: Optional[str] = None):
        prefix = f"field '{field}': " if field else ""
        super().__init__(prefix + message)
        self.field = field


class NotAHomomorphismError(InputError):
    pass


class NotInGroupError(CNGroupsError, ValueError):
    pass


class NotSolubleError(CNGroupsError, ValueError):
    pass


class ConstructionError(CNGroupsError):
    """A construction proven impossible (as opposed to a search that ran out)"""


class ResourceBoundError(CNGroupsError):
    """A configured bound was exceeded; parameter names the bound"""

    parameter = "bound"

    def __init__(self, message: str, value: Optional[int] = None, limit: Optional[int] = None):
        details = ""
        if value is not None and limit is not None:
            details = f" ({value} > {self.parameter}={limit})"
        super().__init__(message + details)
        self.value = value
        self.limit = limit


class EnumerationBoundError(ResourceBoundError):
    parameter = "max_order"


class QuotientDegreeError(ResourceBoundError):
    parameter = "quotient_degree"


class DegreeBoundError(ResourceBoundError):
    parameter = "max_degree"


class SubgroupScanBoundError(ResourceBoundError):
    parameter = "subgroup_scan"


class SearchExhaustedError(ResourceBoundError):
    parameter = "search_budget"


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code"""
    if isinstance(exc, ResourceBoundError):
        return EXIT_RESOURCE_BOUND
    if isinstance(exc, CNGroupsError):
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR
