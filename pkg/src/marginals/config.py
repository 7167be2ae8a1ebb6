from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import InstanceTooLarge


@dataclass(frozen=True)
class Caps:
    """Size limits. Everything here is exponential in the window, so fail loudly."""

    patterns: int = 2**24          # |Omega_n|
    generators: int = 200_000      # intermediate rays in double description
    constraints: int = 2_000_000   # explicit (E, a, u) triples
    torus: int = 6                 # side of the 2D periodic search
    language: int = 100_000        # words per compiled level
    vertex_route: int = 64         # max |Omega_k| projected through vertex enumeration
    d2_tower: int = 1              # allowed k - n for d >= 2 towers

    def check(self, name: str, value: int) -> None:
        limit = getattr(self, name)
        if value > limit:
            raise InstanceTooLarge(name, value, limit)


DEFAULT_CAPS = Caps()


@dataclass
class RunConfig:
    d: int = 1
    n: int = 1
    alphabet: tuple[str, ...] = ("0", "1")
    caps: Caps = field(default_factory=Caps)
    out: str | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        for name in Caps.__dataclass_fields__:
            if getattr(self.caps, name) <= 0:
                raise ValueError(f"cap {name} must be positive")

    def with_caps(self, **kw) -> "RunConfig":
        return replace(self, caps=replace(self.caps, **kw))
