#!/usr/bin/env python3
"""
Command-line wrapper for the COB entanglement detector.
Run `python detect_entanglement.py --help` for the sub-commands.
"""

from src.main import main

if __name__ == "__main__":
    main()
