"""Main entry point for running mixturecalc as a module."""

from .cli import main

if __name__ == "__main__":
    exit(main())
