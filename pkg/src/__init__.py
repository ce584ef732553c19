"""
udense: most probable and nucleus densest subgraphs of uncertain graphs.
"""

__version__ = "1.0.0"
