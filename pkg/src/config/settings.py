"""
Configuration settings for the graph C*-algebra K-homology engine.
"""
import os
import configparser
from pathlib import Path


def get_config_path() -> Path:
    """Get the path to config.ini file."""
    # Go up from src/config/ to the repository root
    return Path(__file__).parent.parent.parent / "config.ini"


def load_config() -> configparser.ConfigParser:
    """Load configuration from config.ini file."""
    config = configparser.ConfigParser()
    config_path = get_config_path()
    if config_path.exists():
        config.read(config_path)
    return config


_config = load_config()


def _int(section: str, key: str, env: str, default: str) -> int:
    return int(_config.get(section, key, fallback=os.getenv(env, default)))


def _flag(value: str) -> bool:
    return str(value).lower() in ("true", "1", "yes")


class AppSettings:
    """Application configuration settings."""

    # Application metadata
    APP_NAME = "khomology"
    APP_VERSION = "1.0.0"

    # Verification corpus
    SEED = int(os.getenv("KHOM_SEED") or _config.get('verification', 'seed', fallback="1729"))
    SNF_MATRICES = _int('verification', 'snf_matrices', "KHOM_SNF_MATRICES", "1000")
    SNF_MAX_DIM = _int('verification', 'snf_max_dim', "KHOM_SNF_MAX_DIM", "12")
    SNF_ENTRY_BOUND = _int('verification', 'snf_entry_bound', "KHOM_SNF_ENTRY_BOUND", "9")
    COMPLEX_GRAPHS = _int('verification', 'complex_graphs', "KHOM_COMPLEX_GRAPHS", "500")
    COMPLEX_MAX_VERTICES = _int('verification', 'complex_max_vertices', "KHOM_COMPLEX_MAX_VERTICES", "8")
    COMPLEX_MAX_EDGES = _int('verification', 'complex_max_edges', "KHOM_COMPLEX_MAX_EDGES", "16")
    MODULE_GRAPHS = _int('verification', 'module_graphs', "KHOM_MODULE_GRAPHS", "200")
    MODULE_MAX_VERTICES = _int('verification', 'module_max_vertices', "KHOM_MODULE_MAX_VERTICES", "6")
    MODULE_MAX_EDGES = _int('verification', 'module_max_edges', "KHOM_MODULE_MAX_EDGES", "12")
    ETA_BOUND = _int('verification', 'eta_bound', "KHOM_ETA_BOUND", "5")
    LENS_MAX_N = _int('verification', 'lens_max_n', "KHOM_LENS_MAX_N", "4")
    LENS_MAX_P = _int('verification', 'lens_max_p', "KHOM_LENS_MAX_P", "5")
    LENS_TABLE_MAX_P = _int('verification', 'lens_table_max_p', "KHOM_LENS_TABLE_MAX_P", "7")
    PROJECTIVE_MAX_N = _int('verification', 'projective_max_n', "KHOM_PROJECTIVE_MAX_N", "6")
    DETERMINANT_MAX_N = _int('verification', 'determinant_max_n', "KHOM_DETERMINANT_MAX_N", "6")
    DETERMINANT_MAX_P = _int('verification', 'determinant_max_p', "KHOM_DETERMINANT_MAX_P", "7")

    # Defect certificates
    GUARD_WIDTH = _int('certificates', 'guard_width', "KHOM_GUARD_WIDTH", "8")
    RELATION_WINDOW = _int('certificates', 'relation_window', "KHOM_RELATION_WINDOW", "6")
    ORACLE_FACTOR = _int('certificates', 'oracle_factor', "KHOM_ORACLE_FACTOR", "3")

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL") or _config.get('logging', 'log_level', fallback="WARNING")
    LOG_TO_FILE = _flag(os.getenv("LOG_TO_FILE") or _config.get('logging', 'log_to_file', fallback="false"))
    LOG_FILE = _config.get('logging', 'log_file', fallback=os.getenv("LOG_FILE", "khomology.log"))
    LOG_MAX_SIZE = _int('logging', 'log_max_size', "LOG_MAX_SIZE", "10485760")   # 10 MB
    LOG_BACKUP_COUNT = _int('logging', 'log_backup_count', "LOG_BACKUP_COUNT", "5")

    # File paths
    CONFIG_DIR = Path.home() / ".khomology"
    LOG_DIR = CONFIG_DIR / "logs"

    # CLI exit codes
    EXIT_OK = 0
    EXIT_FAILURE = 1
    EXIT_PARSE_ERROR = 2
    EXIT_VALIDATION_ERROR = 3
    EXIT_MISSING_ETA = 4

    @classmethod
    def ensure_directories(cls):
        """Ensure required directories exist."""
        if cls.LOG_TO_FILE:
            cls.LOG_DIR.mkdir(parents=True, exist_ok=True)


# Global settings instance
settings = AppSettings()
