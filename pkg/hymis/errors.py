from typing import Optional


class HymisError(Exception):
    pass


class InvalidArgumentError(HymisError, ValueError):
    pass


class ParseError(HymisError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralIntegrityError(HymisError):
    pass


class InvalidSolutionError(HymisError):
    pass


class ResourceLimitError(HymisError):
    pass
