"""Multi-domain scientific sequence toolkit.

Tokenization and boundary-token wrapping for small molecules, proteins,
DNA, RNA, and crystalline materials; cross-domain corpus construction and
instruction templating; and the matching generation-metric suite.
"""

__version__ = "0.1.0"
