"""laurent-rows: certified unimodular-row reductions and universal-ring oracles"""

__version__ = "0.1.0"
