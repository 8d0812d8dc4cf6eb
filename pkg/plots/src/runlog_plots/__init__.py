"""Offline figure generation for airship tracking run logs."""

from .figures import EXPECTED_COLUMNS, KINDS, EmptyLog, FigureSpec, LogData, \
    SchemaMismatch, build_figure, read_log, render, sidecar_offset

__version__ = "0.1.0"
