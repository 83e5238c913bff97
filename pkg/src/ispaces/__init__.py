"""Truncated diagram spaces over the injection category.

Finite simplicial sets with exact integer homology, diagram spaces over the
injection category at finite truncation, commutative diagram-space monoids
with bar constructions and group completion diagnostics, and Gamma-space
repackagings, plus a CLI scenario runner.
"""

__version__ = "0.1.0"
