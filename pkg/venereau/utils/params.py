import argparse


def nonnegative_int(raw: str) -> int:
    """Тип для argparse: целое ≥ 0, иначе ошибка использования (код 64)."""
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидалось целое число, получено {raw!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"ожидалось неотрицательное число, получено {value}")
    return value


def positive_int(raw: str) -> int:
    value = nonnegative_int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("ожидалось число ≥ 1")
    return value
