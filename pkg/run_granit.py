#!/usr/bin/env python3
"""
Main script to run GRANIT simulation studies
"""
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from cli.granit_cli import main


if __name__ == "__main__":
    sys.exit(main())
