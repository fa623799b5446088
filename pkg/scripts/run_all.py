"""Run every experiment on the shipped configs and write the report to ./schiffer_out (or --out)."""
import sys

from schiffer.experiments_cli import main

if __name__ == "__main__":
    sys.exit(main(["all"] + sys.argv[1:]))
