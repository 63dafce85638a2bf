import logging
from pathlib import Path


class LoggingSetup:
    @staticmethod
    def setup_logging(log_path, level=logging.INFO):
        """Logging solo su file: la console resta per il report e le righe di stato."""
        log_file = Path(log_path)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        root_logger = logging.getLogger()
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
            handler.close()

        logging.basicConfig(
            level=level,
            format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
            handlers=[logging.FileHandler(log_file, encoding="utf-8")],
            force=True,
        )
        logging.getLogger(__name__).info(f"Logging su file attivo: {log_file}")
