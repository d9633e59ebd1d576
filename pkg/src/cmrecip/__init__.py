"""cmrecip: exact verification of CM-type reciprocity cokernels and friends.

Modules:

* ``intlin``      exact integer linear algebra (HNF/SNF, lattices, quotients)
* ``sgnperm``     signed permutation groups (hyperoctahedral groups W_g)
* ``glattice``    lattices with a group action, invariant forms, cohomology
* ``cmtypes``     admissible CM configurations (G, S, H) and their enumeration
* ``reciprocity`` the reciprocity map on cocharacters and cokernel certificates
* ``transfer``    finite modules over prime fields and transfer chains
* ``quadforms``   binary quadratic forms, class numbers, growth tables
* ``cli``         batch command-line interface
"""

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "intlin",
    "sgnperm",
    "glattice",
    "cmtypes",
    "reciprocity",
    "transfer",
    "quadforms",
    "cli",
]
