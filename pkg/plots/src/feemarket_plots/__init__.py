"""Figure rendering for fee-market simulation CSV outputs."""

from feemarket_plots.render import FIGURES, FigureSpec, render

__all__ = ["FIGURES", "FigureSpec", "render"]
