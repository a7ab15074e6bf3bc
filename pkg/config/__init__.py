"""Environment settings and numeric parameters."""
from .settings import BASE_DIR, PARAMETERS_FILE, THREADS
