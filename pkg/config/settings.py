import os
from dotenv import load_dotenv

load_dotenv()


# ========================================
# ЛИМИТЫ ТОЧНЫХ РЕШАТЕЛЕЙ
# ========================================

# Точный DFVS: размер наибольшей сильно связной компоненты после редукций
EXACT_DFVS_MAX_VERTICES = int(os.getenv("HYBRID_EXACT_DFVS_MAX_VERTICES", "25"))

# Переборные оракулы
BRUTE_FORCE_MAX_LEAVES = 10         # Макс. число таксонов для перебора MAAF
BRUTE_FORCE_MAX_CHAINS = 20         # Макс. число цепочек для перебора разбиений B_T
BRUTE_FORCE_MAX_EDGES = 24          # Макс. число рёбер S для перебора легитимных лесов

# Проверка отображения сетью: 2^h переключений
DISPLAY_MAX_RETICULATIONS = 16



# ========================================
# ВОСПРОИЗВОДИМОСТЬ И ПАРАЛЛЕЛИЗМ
# ========================================

DEFAULT_SEED = 20240611             # Seed по умолчанию для случайных корпусов
DEFAULT_THREADS = int(os.getenv("HYBRID_THREADS", "1"))  # Воркеры для решателей



# ========================================
# РЕДУКЦИИ И ГЕНЕРАТОР ДЕРЕВЬЕВ
# ========================================

RHO_LABEL = "rho"                   # Служебная метка корня ρ (запрещена во входных данных)
SUBTREE_LABEL_PREFIX = "st"         # Свежие метки для свёрнутых поддеревьев
CHAIN_LABEL_PREFIXES = ("ca", "cb")  # Свежие метки для свёрнутых цепочек (a, b)

DEFAULT_APPROXIMATION_FACTOR = 2    # c для формул ℓ и L по умолчанию
DEFAULT_SOLVER = "exact"            # Решатель DFVS в конвейере по умолчанию



# ========================================
# ЛОГИРОВАНИЕ
# ========================================

LOG_LEVEL = os.getenv("HYBRID_LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# JSON логирование
ENABLE_JSON_LOGGING = os.getenv("HYBRID_JSON_LOGGING", "false").lower() == "true"
JSON_LOG_FILE = "logs/hybridization.json"  # Путь к файлу JSON логов

# Ротация логов
LOG_ROTATION_ENABLED = True  # Включить ротацию файлов логов
LOG_MAX_BYTES = 1 * 1024 * 1024  # Макс. размер файла логов (1 МБ)
LOG_BACKUP_COUNT = 5  # Количество архивных файлов логов

# Мониторинг
SLOW_OPERATION_THRESHOLD = 2.0  # Порог для медленных операций (секунды)
