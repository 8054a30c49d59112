"""Level-one affine Lie algebra computations: root systems, characters,
conformal embeddings, Verlinde numbers and finite Heisenberg groups."""

__version__ = "0.1.0"
