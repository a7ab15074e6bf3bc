import os
from dotenv import load_dotenv

# Load environment variables
if os.path.exists('.env.local'):
    load_dotenv('.env.local')
else:
    load_dotenv('.env')


def _threads_from_env() -> int:
    raw = os.getenv('THREADS', '').strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# Worker count for verification sweeps
THREADS = _threads_from_env()

# File paths
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PARAMETERS_FILE = os.path.join(BASE_DIR, 'config', 'parameters.json')
