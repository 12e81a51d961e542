import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent


class Config:
    # Registry
    REGISTRY_PATH = os.getenv("POLYPIVOT_REGISTRY", str(BASE_DIR / "data" / "morphemes.tsv"))

    # Determinism / parallelism
    SEED = int(os.getenv("POLYPIVOT_SEED", "1234"))
    JOBS = int(os.getenv("POLYPIVOT_JOBS", str(os.cpu_count() or 1)))

    # Logging Configuration
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("LOG_FILE", "")
    LOG_MAX_BYTES = int(os.getenv("LOG_MAX_BYTES", "10485760"))
    LOG_BACKUP_COUNT = int(os.getenv("LOG_BACKUP_COUNT", "5"))

    # DAE noise defaults (token mask, token dropout, statement permutation)
    MASK_RATIO = float(os.getenv("MASK_RATIO", "0.3"))
    DROPOUT_RATIO = float(os.getenv("DROPOUT_RATIO", "0.3"))
    PERMUTE_RATIO = float(os.getenv("PERMUTE_RATIO", "0.2"))
    BOW_MASK_RATIO = float(os.getenv("BOW_MASK_RATIO", "0.5"))
    BOW_DROPOUT_RATIO = float(os.getenv("BOW_DROPOUT_RATIO", "0.5"))
    BOW_PERMUTE_RATIO = float(os.getenv("BOW_PERMUTE_RATIO", "0.0"))
    # local shuffle: max positions a token may move (0 disables)
    SHUFFLE_WINDOW = int(os.getenv("SHUFFLE_WINDOW", "0"))

    # MLM
    MLM_MASK_RATIO = float(os.getenv("MLM_MASK_RATIO", "0.15"))

    # Execution-based evaluation
    CA_TIMEOUT = float(os.getenv("CA_TIMEOUT", "5.0"))
    RUNNER_CONFIG = os.getenv("RUNNER_CONFIG", "")


# Create a config instance for module-level access
config = Config()
