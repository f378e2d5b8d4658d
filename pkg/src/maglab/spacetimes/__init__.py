"""Concrete spacetimes and synthetic metric-affine test spaces."""
