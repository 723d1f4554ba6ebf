"""Cayley indices of finite groups: groups, graphs, automorphisms and the
searches and constructions that certify most rigid representations."""

__version__ = "0.1.0"
