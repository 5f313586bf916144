import sys

from tempowalk.cli import main

sys.exit(main())
