"""Classification, conserved quantities, and long-time asymptotics of
systems of two coupled cubic Schrodinger equations in one dimension."""

__version__ = "0.1.0"
