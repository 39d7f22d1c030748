import sys

from migraph.cli import main

sys.exit(main())
