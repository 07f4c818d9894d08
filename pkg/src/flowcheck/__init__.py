"""Checking data-flow properties of safe Petri nets with transits."""

__version__ = "0.1.0"
