"""
Exceptions raised across the toolbox.

Each maps onto one failure kind of the pipeline and onto a CLI exit code.
"""
from typing import Optional, Sequence


class InvalidArgumentError(ValueError):

    def __init__(self, field: str, message: str):
        """Constructor.

        Args:
            field: Name of the offending argument or config field.
            message: What is wrong with it.
        """
        self.field = field
        super().__init__(f'{field}: {message}')


class InvalidStateError(ValueError):

    def __init__(self, failed_checks: Sequence[str]):
        self.failed_checks = tuple(failed_checks)
        super().__init__('Density matrix is not physical, failed checks: '
                         + ', '.join(self.failed_checks))


class OutOfRangeError(ValueError):
    pass


class ConfigError(ValueError):

    def __init__(self, path: str, message: str):
        """Constructor.

        Args:
            path: Dotted path of the config field, e.g. source.noise_p.
            message: What is wrong with it.
        """
        self.path = path
        super().__init__(f'{path}: {message}')


class ParseError(ValueError):

    def __init__(self, line: int, message: str, path: Optional[str] = None):
        """Constructor.

        Args:
            line: 1-based line number in the file, the header is line 1.
            message: What could not be parsed.
            path: The file being parsed.
        """
        self.line = line
        self.file_path = path
        where = f'{path}:{line}' if path is not None else f'line {line}'
        super().__init__(f'{where}: {message}')


class FitError(RuntimeError):
    pass


class ReconstructionError(FitError):

    def __init__(self, message: str, grad_norm: float, iterations: int):
        self.grad_norm = grad_norm
        self.iterations = iterations
        super().__init__(f'{message} (gradient norm {grad_norm:.3e} after '
                         f'{iterations} iterations)')


class OutputError(OSError):
    pass
