"""
logger.py
Модуль для логирования в приложении. Этот файл отвечает за создание и настройку логгера, который записывает
информацию о ходе вычислений: пропущенные индексы в условиях теорем, неудачные шаги индукции, результаты поиска
сопряжений и расхождения при перекрёстной проверке. Логирование осуществляется в потоко-безопасном режиме.
"""

import inspect
import os
import sys
import threading
import traceback
from datetime import datetime

from dotenv import load_dotenv

# Загружаем переменные окружения из .env-файла
load_dotenv()

LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}


class Logger:
    """
    Класс Logger обеспечивает централизованное логирование в приложении.
    Логирование осуществляется в файл, указанный в переменной окружения LOGS_PATH, а если он не задан, в stderr.
    Сообщения ниже порога LOG_LEVEL отбрасываются.
    """

    def __init__(self, log_file=None, min_level=None):
        """
        Инициализирует экземпляр логгера.
        :param log_file: Путь к файлу логов (по умолчанию загружается из переменной окружения LOGS_PATH).
        :param min_level: Минимальный уровень записи (по умолчанию LOG_LEVEL или WARNING).
        """
        self.lock = threading.Lock()  # Для управления доступом при многопоточном логировании
        self.log_file = log_file if log_file is not None else os.getenv("LOGS_PATH")
        level = (min_level or os.getenv("LOG_LEVEL") or "WARNING").upper()
        self.min_level = LEVELS.get(level, LEVELS["WARNING"])

    def enabled(self, level):
        return LEVELS.get(level.upper(), LEVELS["INFO"]) >= self.min_level

    def log(self, message, level="INFO", exc_info=None):
        """
        Записывает лог-сообщение.
        :param message: Текст сообщения
        :param level: Уровень логирования (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        :param exc_info: Исключение, трассировку которого нужно приложить (опционально)
        """
        if not self.enabled(level):
            return
        with self.lock:  # Потоко-безопасная запись
            # Получаем данные о месте вызова
            caller_frame = inspect.stack()[1]
            filename = os.path.basename(caller_frame.filename)
            func_name = caller_frame.function if caller_frame.function != "<module>" else "main"
            line_number = caller_frame.lineno
            current_time = datetime.now().strftime("%Y-%m-%d %H:%M:%S,%f")[:-3]

            if exc_info:
                error_message = traceback.format_exception(None, exc_info, exc_info.__traceback__)
                message += f" | Error: {''.join(error_message).strip()}"

            log_entry = f"{current_time}:{filename}:{func_name}:{line_number}:{level.upper()}:{message}"

            if self.log_file:
                with open(self.log_file, "a", encoding="utf-8") as file:
                    file.write(log_entry + "\n")
            else:
                sys.stderr.write(log_entry + "\n")


# Создаем глобальный экземпляр логгера
logger = Logger()
