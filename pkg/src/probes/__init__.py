"""Randomized exact probes: secant dimensions and tangential weak defectivity."""

from .secant import SecantProbe, SecantReport
from .twd import TwdProbe, TwdReport

__all__ = ['SecantProbe', 'SecantReport', 'TwdProbe', 'TwdReport']
