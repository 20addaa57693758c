from csdict.cli import main
import sys

sys.exit(main())
