"""
Soliton Lab - numerical laboratory for dark solitons of nonlinear Schrodinger equations
"""

__version__ = "1.0.0"
