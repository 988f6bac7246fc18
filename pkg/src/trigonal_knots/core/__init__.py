"""Core algebra: schemes, braids, curves, two-bridge arithmetic and certificates."""
