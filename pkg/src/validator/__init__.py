"""Verification module - identity and oracle suites behind the verify command."""
