"""Cyclic transversal polytopes over the two-element field.

A block configuration is an ordered family of non-empty subsets of
``F_2^d``; its cyclic transversal polytope (CTP) is the convex hull of the
incidence vectors of all transversals whose entries sum to zero.  This
package constructs such configurations (directly or by reduction from SAT,
packing, matching, and cut problems), enumerates cyclic transversals,
generates and separates lifted odd-set inequalities, builds flow-based
extended formulations and rank relaxations, and verifies all claims with
exact rational arithmetic.
"""

from ctp.gf2 import BitMatrix, BitVec
from ctp.blocks import BlockConfiguration, full, new_config

__all__ = ["BitVec", "BitMatrix", "BlockConfiguration", "new_config", "full"]

__version__ = "0.1.0"
