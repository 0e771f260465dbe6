"""``python -m horizon_teleport`` dispatches to the CLI."""

from .cli import entry

if __name__ == "__main__":
    entry()
