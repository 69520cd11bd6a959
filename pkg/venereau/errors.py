class VenereauError(Exception):
    """Базовое исключение пакета: всё, что CLI переводит в код выхода 2."""


class RingMismatchError(VenereauError):
    pass


class UnknownVariableError(VenereauError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class IntegralityError(VenereauError):
    """Отрицательная степень там, где кольцо её не допускает."""


class InvalidParameterError(VenereauError, ValueError):
    pass


class ParseError(VenereauError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (строка {line}, столбец {column})")
        self.message = message
        self.line = line
        self.column = column


class VerificationError(VenereauError):
    """Проверка тождества не прошла; residual: ненулевая разность lhs − rhs."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class CertificateError(VenereauError):
    pass


class SearchBoundsError(VenereauError):
    pass


class UnknownSymbolError(VenereauError, KeyError):
    def __init__(self, symbol: str, suggestion: str | None = None):
        self.symbol = symbol
        self.suggestion = suggestion
        hint = f"; возможно, имелось в виду {suggestion!r}" if suggestion else ""
        super().__init__(f"неизвестный символ {symbol!r}{hint}")

    def __str__(self) -> str:
        return self.args[0]
