"""Figure renderers for cantoreuler verification reports."""

from .render import build_figure, render
from .specs import FIGURE_IDS, FigureSpec, FigureStyle, ReportFormatError, load_report

__version__ = "0.1.0"
