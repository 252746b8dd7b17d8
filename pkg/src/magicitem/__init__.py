"""magicitem: a workbench for natural-language object behaviors.

Prompts go in one end; sandboxed ItemScript comes out the other and runs
inside a deterministic world simulation.
"""

__version__ = "0.1.0"
