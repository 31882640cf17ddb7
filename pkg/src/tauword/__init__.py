"""Exact symbolic computation with infinite and transfinite word concatenations.

Modules:

- ``free_words``: reduced words in finitely generated free groups.
- ``word_expr``: finitely described loop expressions with omega- and
  tau-ordered infinite products, their free-group projections, letter-count
  vectors, rearrangement, and commutator factorization.
- ``orders``: exact middle-third component arithmetic, canonical order
  embeddings, and extension of bijections between embedded orders.
- ``rearrange``: finitely described bijections of the positive integers.
- ``specker``: eventually periodic integer sequences, quotient equalities,
  and Smith normal form.
- ``james_monoid``: word combinatorics and exhaustive point-set checks for
  reduced products over finite based posets.
- ``cli``: the ``tauword`` command line front end.
"""

from . import free_words, james_monoid, orders, rearrange, specker, word_expr

__all__ = [
    "free_words",
    "word_expr",
    "orders",
    "rearrange",
    "specker",
    "james_monoid",
]

__version__ = "0.1.0"
