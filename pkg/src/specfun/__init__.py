"""Special functions module - Bessel/Hankel evaluation, Helmholtz kernels, quadrature identities."""
