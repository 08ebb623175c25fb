import sys

from hodgeloci.cli import main

if __name__ == "__main__":
    sys.exit(main())
