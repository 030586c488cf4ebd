"""
Configuration module for the q-lab workbench.
Loads numeric defaults from the environment (and a .env file if present).
"""

import os
from pathlib import Path
from typing import List, Tuple

from dotenv import load_dotenv

# Get project root directory
PROJECT_ROOT = Path(__file__).parent.parent

# Load .env file if it exists; the process environment wins otherwise
ENV_PATH = PROJECT_ROOT / '.env'
ENV_LOADED = ENV_PATH.exists() and load_dotenv(ENV_PATH)


def _parse_window(raw: str) -> Tuple[int, int]:
    lo, hi = (int(part) for part in raw.split(','))
    return lo, hi


# Numeric defaults
DEFAULT_TOL = float(os.getenv('Q_LAB_TOL', '1e-14'))
MAX_TERMS = int(os.getenv('Q_LAB_MAX_TERMS', '10000'))
K_WINDOW = _parse_window(os.getenv('Q_LAB_K_WINDOW', '-400,4000'))
RESIDUAL_TOL = float(os.getenv('Q_LAB_RESIDUAL_TOL', '1e-8'))

# Report defaults
OUTPUT_DIR = PROJECT_ROOT / os.getenv('Q_LAB_OUTPUT_DIR', 'output')
DEFAULT_SEED = int(os.getenv('Q_LAB_SEED', '0'))


def validate_config() -> Tuple[bool, List[str]]:
    """
    Validate that the numeric configuration is usable.

    Returns:
        tuple: (is_valid, error_messages)
    """
    errors = []

    if not DEFAULT_TOL > 0:
        errors.append(f" Q_LAB_TOL must be positive, got {DEFAULT_TOL}")
    if MAX_TERMS <= 0:
        errors.append(f" Q_LAB_MAX_TERMS must be positive, got {MAX_TERMS}")

    k_min, k_max = K_WINDOW
    if not k_min <= 0 <= k_max:
        errors.append(f" Q_LAB_K_WINDOW must contain 0, got {k_min},{k_max}")

    if not RESIDUAL_TOL > 0:
        errors.append(f" Q_LAB_RESIDUAL_TOL must be positive, got {RESIDUAL_TOL}")

    return len(errors) == 0, errors


if __name__ == "__main__":
    # Test configuration when run directly
    print("\n" + "="*60)
    print("Configuration Validation")
    print("="*60 + "\n")

    if ENV_LOADED:
        print(f"✓ Loaded environment variables from {ENV_PATH}")
    else:
        print("⚠ No .env file found, using system environment variables")

    print(f"  tol={DEFAULT_TOL}  max_terms={MAX_TERMS}  k_window={K_WINDOW}")
    print(f"  residual_tol={RESIDUAL_TOL}  output_dir={OUTPUT_DIR}")

    is_valid, errors = validate_config()

    if is_valid:
        print("\n✅ Configuration is valid!")
    else:
        print("\n⚠ Configuration issues found:\n")
        for error in errors:
            print(f"  {error}")
        print("\nPlease update your .env file with the correct values.")

    print("\n" + "="*60 + "\n")
