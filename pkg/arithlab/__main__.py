import sys

from arithlab.main import main

sys.exit(main())
