#!/usr/bin/env python3
"""
Coprimator - Entry Point
Coprime commutator and Fitting height toolkit
"""

import sys
import os

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

EXIT_CRASH = 3

if __name__ == "__main__":
    try:
        from src.cli.main import run
        code = run()
    except Exception as e:
        import traceback
        error_msg = f"UNEXPECTED ERROR:\n{str(e)}\n\nDETAILS:\n{traceback.format_exc()}"

        try:
            # Crash log goes to the home directory, which is always writable
            home_path = os.path.expanduser("~")
            log_path = os.path.join(home_path, "Coprimator_CRASH.txt")

            with open(log_path, "w", encoding="utf-8") as f:
                f.write(error_msg)

            print(f"Crash log written to: {log_path}", file=sys.stderr)
        except Exception as log_error:
            print(f"CRITICAL: could not write crash log: {log_error}", file=sys.stderr)
            print(error_msg, file=sys.stderr)

        sys.exit(EXIT_CRASH)
    sys.exit(code)
