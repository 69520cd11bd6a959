import os

from dotenv import load_dotenv

load_dotenv()

# Верхняя граница оценки перебора в search_certificate: (2C+1)^|F| кандидатов.
SEARCH_CAP = int(os.getenv("VENEREAU_SEARCH_CAP", "200000"))

WORKERS = int(os.getenv("VENEREAU_WORKERS", "1"))

SEED = int(os.getenv("VENEREAU_SEED", "0"))

# Сколько случайных целых точек проверяется на каждое тождество набора.
SMOKE_POINTS = int(os.getenv("VENEREAU_SMOKE_POINTS", "10"))

LOG_LEVEL = os.getenv("VENEREAU_LOG_LEVEL", "WARNING").upper()
