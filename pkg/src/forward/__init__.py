"""Forward module - Nystrom boundary-integral solvers and synthetic Cauchy data."""
