"""Experiment module - noise model, dataset files, experiment configuration and example ladders."""
