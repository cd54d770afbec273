"""Link and band diagrams on 3-manifold spines and flow-spines."""

__version__ = "0.1.0"
