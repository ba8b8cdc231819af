import sys

from compas_fpp.cli import main

if __name__ == "__main__":
    sys.exit(main())
