import sys

from mht.cli import main

sys.exit(main())
