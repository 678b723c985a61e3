from dataclasses import dataclass, fields, replace

from .errors import ParseError


@dataclass(frozen=True)
class Caps:
    """Enumeration limits. Every operation that could blow up checks one of these."""

    group_order: int = 10_000
    subset_enum: int = 2**20
    label_enum: int = 2**20
    point_enum: int = 2**20
    tensor_dim: int = 4096
    matrix_dim: int = 4096
    # identity-containing candidate subsets examined by the census
    census: int = 2**30

    def override(self, **kw):
        names = {f.name for f in fields(self)}
        for key, value in kw.items():
            if key not in names:
                raise ParseError(f"unknown cap {key!r}; known: {sorted(names)}")
            if not isinstance(value, int) or value < 1:
                raise ParseError(f"cap {key!r} must be a positive integer, got {value!r}")
        return replace(self, **kw)


DEFAULT_CAPS = Caps()
