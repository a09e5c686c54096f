"""Command implementations behind ``main.py``: each returns a JSON-ready document."""

from .run_config import RunConfig
from .analyze import cmd_analyze
from .certify import cmd_certify
from .table import TABLES, cmd_table
from .selftest import cmd_selftest

__all__ = ['RunConfig', 'TABLES', 'cmd_analyze', 'cmd_certify', 'cmd_selftest', 'cmd_table']
