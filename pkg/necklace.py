# ------------------------------------------------------------------------------
# Entry script: `python necklace.py <subcommand> ...`
# Same as `python -m necklace_lab`; all logic lives in necklace_lab.cli.
# ------------------------------------------------------------------------------
import sys

from necklace_lab.cli import main

if __name__ == "__main__":
    sys.exit(main())
