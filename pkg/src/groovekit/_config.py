"""Process-wide settings read from the environment."""
import os


def thread_count() -> int:
    """Worker cap from GROOVEKIT_THREADS (default 1, invalid values ignored)."""
    try:
        return max(1, int(os.environ.get("GROOVEKIT_THREADS", "1")))
    except ValueError:
        return 1
