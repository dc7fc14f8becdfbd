"""Exact combinatorics of Deodhar strata in the real Grassmannian and
tropical contour analysis of KP line-soliton solutions."""

__version__ = '0.1.0'
