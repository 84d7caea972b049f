"""foamlab: exact foam evaluation, Witt/sl2/p-DG operators, web state spaces."""

__version__ = "0.1.0"
