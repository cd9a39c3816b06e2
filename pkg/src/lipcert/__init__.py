"""Exact certificates for isometric l1/linf subspaces of strongly
norm-attaining Lipschitz functionals over finite and interval-based pointed
metric spaces."""

__version__ = "0.1.0"
