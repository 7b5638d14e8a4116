#!/usr/bin/env python3
"""Start the gradelab HTTP service. Same flags as `gradelab-server`."""

from gradelab.server import main

if __name__ == "__main__":
    main()
