"""Complexes of injectives over A_n = kC_n / (paths of length 2): decomposition
into indecomposables, Hom in the homotopy category, and quiver tools."""

__version__ = "0.1.0"
