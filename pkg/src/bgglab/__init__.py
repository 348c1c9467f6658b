"""Exact sl2 Verma, Koszul and BGG computations over Q(k), plus Weyl-group BGG shapes."""

__version__ = "0.1.0"
