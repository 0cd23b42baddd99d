"""kanform: exact chain algebra on free simplicial groups paired with
numerical equivariant differential forms on compact matrix groups."""

__version__ = "0.1.0"
