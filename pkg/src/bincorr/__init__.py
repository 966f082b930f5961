"""
bincorr: separability of two-qubit states from binary correlation measurements.

Modules:
    linalg       -- Jacobi eigensolver and small dense helpers
    qstate       -- pure states, density matrices, Bloch form
    correlation  -- covariances and the correlation matrix C
    detect       -- rank classifier, three-probe protocol, oracles, Werner family
    shotsim      -- finite-shot measurement simulator
    states       -- fixtures, seeded generators, state files
    report       -- run reports and text tables
    verify       -- property suites
    cli          -- command line
"""

__version__ = "0.1.0"
