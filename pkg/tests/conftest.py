"""Shared fixtures: a tiny flat-plane experiment that runs in seconds."""

import pytest

TINY_EXPERIMENT = """
[surface]
name = flat:1

[physics]
bc = dirichlet
k_plus = 5
nodes_per_wavelength = 12

[measurement]
H = 1.5
A = 2
N = 4

[imaging]
M = 32
grid = -1:1:5,0.5:1.3:9
window = -1:1

[noise]
delta = 0.1
seed = 4
"""


@pytest.fixture
def tiny_config_path(tmp_path):
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_EXPERIMENT)
    return path
