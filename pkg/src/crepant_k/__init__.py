"""K-theory of crepant resolutions of orbifolds with SU(2) singularities."""

__version__ = "0.1.0"
