"""Exact workbench for Artin-Schreier DGAs over prime fields."""

__version__ = "0.1.0"
