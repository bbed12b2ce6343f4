"""Allow ``python -m fkflab``."""

from .cli import main

if __name__ == "__main__":
    main()
