import sys

from necklace_lab.cli import main

sys.exit(main())
