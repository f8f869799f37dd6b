"""
Command package

Each module exposes ``add_parser(subparsers)`` registering one sub-command
whose handler returns the process exit code.
"""

from commands import check_command, generate_command, render_command, simulate_command, verify_command

COMMANDS = [generate_command, check_command, simulate_command, verify_command, render_command]

__all__ = ["COMMANDS"]
