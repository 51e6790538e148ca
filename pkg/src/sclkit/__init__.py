"""Exact stable commutator length in free groups, and the norms it induces on
second homology of graphs of free groups with cyclic edge groups.

Submodules: ``words``, ``exact``, ``scl_engine``, ``surface``, ``oracle``,
``graph_groups``, ``gluing`` and ``cli``.
"""

__version__ = "0.1.0"
