import sys

from afoutage.cli import main

sys.exit(main())
