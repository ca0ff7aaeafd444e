"""Toolkit for labelled-tape rewriting graphs and tape machines.

The package implements three related computational models and the
translations between them:

* degree-0 graphs (:mod:`sgraph.graph0`): finite graphs whose edges act on
  tuples of free-group words by left/right multiplication, guarded by
  exact word equalities;
* higher-degree graphs (:mod:`sgraph.star`): graphs whose edges may also
  invoke operations of reusable objects, lowered to degree 0 by
  :mod:`sgraph.expansion`;
* multi-tape machines (:mod:`sgraph.smachine`): rewriting systems on
  state-delimited tape words, convertible to and from degree-0 graphs.

On top of these sit a library of standard objects (:mod:`sgraph.gadgets`),
a compiler from Turing-style rewriting systems to distributed tapes and
recognizing machines (:mod:`sgraph.turing`, :mod:`sgraph.pipeline`), and a
command line front end (:mod:`sgraph.cli`).
"""

from sgraph.words import Word, Hardware, LWord

__all__ = ["Word", "Hardware", "LWord"]
