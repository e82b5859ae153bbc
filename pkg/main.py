#!/usr/bin/env python3
"""slicesum - Main Entry Point"""

import sys
from pathlib import Path

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent))

from slicesum.cli.app import main as run_cli


def main():
    """Main entry point"""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
