import os
from pathlib import Path

import yaml

REQUIRED_KEYS = ["log", "mode", "output_format", "spectral", "schedule", "topt_map", "discontinuities", "multid"]
MODE_ENV_VAR = "OBSWAVE_MODE"


class ConfigLoader:
    @staticmethod
    def load_config(file_path="config.yaml"):
        with open(file_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
        env_mode = os.environ.get(MODE_ENV_VAR)
        if env_mode:
            config["mode"] = env_mode.strip().lower()
        return config

    @staticmethod
    def validate_config(config):
        """Controlla chiavi obbligatorie e intervalli dei parametri numerici."""
        missing_keys = [key for key in REQUIRED_KEYS if key not in config]
        if missing_keys:
            raise ValueError(f"Chiavi di configurazione mancanti: {', '.join(missing_keys)}")

        if config["mode"] not in ("exact", "float"):
            raise ValueError(f"Modalità non valida: {config['mode']!r} (ammesse exact, float)")
        if config["output_format"] not in ("json", "csv"):
            raise ValueError(f"Formato di output non valido: {config['output_format']!r}")

        spectral = config["spectral"]
        max_truncation = spectral.get("max_truncation", 512)
        if max_truncation > 512:
            raise ValueError(f"spectral.max_truncation oltre 512: {max_truncation}")
        for key in ("truncation", "counterexample_modes"):
            value = spectral.get(key)
            if not isinstance(value, int) or not 1 <= value <= max_truncation:
                raise ValueError(f"spectral.{key} deve essere un intero in [1, {max_truncation}]: {value!r}")
        if not 0 < spectral.get("bump_width_fraction", 0.5) <= 1:
            raise ValueError("spectral.bump_width_fraction deve essere in (0, 1]")

        if config["schedule"].get("horizon_factor", 10) < 1:
            raise ValueError("schedule.horizon_factor deve essere positivo")
        if config["discontinuities"].get("max_order", 6) < 1:
            raise ValueError("discontinuities.max_order deve essere positivo")

    @staticmethod
    def default_path():
        return Path(__file__).resolve().parent.parent / "config.yaml"
