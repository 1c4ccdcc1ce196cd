# Numerical workbench for thermodynamic formalism on subshifts of finite
# type: two-parameter transfer operators, pressure, dynamical zeta
# functions, periodic-orbit statistics and empirical decay diagnostics.

__version__ = "0.1.0"
