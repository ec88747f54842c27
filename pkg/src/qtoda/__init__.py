"""Exact symbolic engine for quantum-group module structure on quasiflag
fixed-point bases, with difference-Toda eigenfunction verification.

Subpackages build bottom-up:

- :mod:`qtoda.symbolic`     exact Laurent / rational-function arithmetic
- :mod:`qtoda.fixed_points` torus fixed points of quasiflag spaces
- :mod:`qtoda.characters`   tangent characters and localization weights
- :mod:`qtoda.operators`    quantum-group generators and relation checks
- :mod:`qtoda.whittaker`    bilinear pairing and Whittaker-type vectors
- :mod:`qtoda.toda`         difference Toda operators and eigen checks
- :mod:`qtoda.cli`          command-line verification driver
"""

__version__ = "0.1.0"
