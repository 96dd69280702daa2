import sys

from hymis.cli import main


sys.exit(main())
