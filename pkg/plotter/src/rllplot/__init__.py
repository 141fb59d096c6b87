"""Offline figure generation for rllsim result CSVs."""

from rllplot.render import PlotSpec, SpecError, render

__all__ = ["PlotSpec", "SpecError", "render"]
