"""
Analytical Core Power Model

Per-component power estimation for parameterized out-of-order cores, with
architecture, implementation and technology parameters decided from a small
set of labelled designs.
"""

__version__ = "1.0.0"
__author__ = "Your Organization"
