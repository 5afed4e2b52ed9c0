#!/usr/bin/env python3
"""
Wright Toolkit - Main Application Entry Point

Exact computations in Wright coordinate rings: membership, generator expressions,
weighted grading, surface intersection numbers, constant-Jacobian searches and
integrality certificates.
"""

import sys
import os
import logging
from pathlib import Path

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

os.makedirs('logs', exist_ok=True)

# Configure logging; stdout is reserved for command output
logging.basicConfig(
    level=os.environ.get('LOG_LEVEL', 'INFO').upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler('logs/app.log'),
        logging.StreamHandler(sys.stderr)
    ]
)


def main():
    """Main application entry point"""
    try:
        from ui.cli import main as run_cli
    except ImportError as e:
        print(f"Import error: {e}", file=sys.stderr)
        print("Please ensure all dependencies are installed: pip install -r requirements.txt", file=sys.stderr)
        sys.exit(2)
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
