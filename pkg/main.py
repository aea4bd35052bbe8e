import sys

from src.cli.storage_sim import main


if __name__ == "__main__":
    sys.exit(main())
