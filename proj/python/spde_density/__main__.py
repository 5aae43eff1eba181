import sys

from ._core import run_cli


def main():
    sys.stdout.flush()
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
