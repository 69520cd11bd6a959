import os

# venereau/config.py читает окружение один раз при импорте: значения по
# умолчанию выставляются до первого импорта пакета, иначе локальный .env
# разработчика менял бы размер перебора и число точек в тестах.
os.environ.setdefault("VENEREAU_SEARCH_CAP", "200000")
os.environ.setdefault("VENEREAU_WORKERS", "1")
os.environ.setdefault("VENEREAU_SEED", "0")
os.environ.setdefault("VENEREAU_SMOKE_POINTS", "3")
os.environ.setdefault("VENEREAU_LOG_LEVEL", "WARNING")

import random  # noqa: E402
from pathlib import Path  # noqa: E402

import pytest  # noqa: E402

from venereau.gallery import Gallery  # noqa: E402

CERT_DIR = Path(__file__).resolve().parent.parent / "venereau" / "certificates"


@pytest.fixture()
def gallery():
    return Gallery()


@pytest.fixture()
def rng():
    return random.Random(0)


@pytest.fixture()
def sol_cert_path():
    return CERT_DIR / "lambda2_sol.cert"


@pytest.fixture()
def sol_cert_n1_path():
    return CERT_DIR / "lambda2_sol_n1.cert"
