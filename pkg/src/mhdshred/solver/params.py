"""Physical parameters and channel geometry."""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class PhysicalParams:
    """Material properties, boundary data and the applied field intensity.

    Units are SI throughout. Defaults describe a lead-lithium melt in a
    heated stepped channel at a 600 K operating point.
    """

    rho0: float = 9806.0          # reference density [kg/m^3]
    mu: float = 1.93e-3           # dynamic viscosity [Pa s]
    mu0: float = 1.26e-6          # magnetic permeability [H/m]
    sigma: float = 7.82e5         # electrical conductivity [1/(Ohm m)]
    beta: float = 1.3e-4          # thermal expansion coefficient [1/K]
    cv: float = 189.5             # specific heat [J/(kg K)]
    kappa: float = 20.93          # thermal conductivity [W/(m K)]
    g: tuple = (0.0, -9.81)       # gravity vector [m/s^2]
    u_in: float = 0.0492          # inlet speed [m/s]
    p_out: float = 1.0e5          # outlet pressure [Pa]
    T0: float = 600.0             # inlet/reference temperature [K]
    T_top: float = 550.0          # upper-step surface temperature [K]
    T_bottom: float = 650.0       # lower-step surface temperature [K]
    B0: float = 0.06              # applied vertical field intensity [T]

    def __post_init__(self):
        positive = {"rho0": self.rho0, "mu": self.mu, "mu0": self.mu0,
                    "sigma": self.sigma, "cv": self.cv, "kappa": self.kappa}
        for name, value in positive.items():
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not (self.T_top < self.T0 < self.T_bottom):
            raise ValueError(
                f"wall temperatures must bracket T0: "
                f"T_top={self.T_top} T0={self.T0} T_bottom={self.T_bottom}")
        object.__setattr__(self, "g", tuple(float(c) for c in self.g))
        if len(self.g) != 2:
            raise ValueError("g must be a 2-vector")

    @property
    def eta(self) -> float:
        """Magnetic diffusivity 1/(sigma*mu0) [m^2/s]."""
        return 1.0 / (self.sigma * self.mu0)

    def with_field(self, b0: float) -> "PhysicalParams":
        return replace(self, B0=float(b0))

    def density(self, T):
        """Linearized equation of state rho = rho0*(1 - beta*(T - T0))."""
        return self.rho0 * (1.0 - self.beta * (T - self.T0))


# Default obstacle layout: two upper steps and one lower step, alternating
# walls, spread evenly along the channel. All spans configurable.
DEFAULT_STEP_SPANS = (
    (0.05, 0.06, "top"),
    (0.09, 0.10, "bottom"),
    (0.13, 0.14, "top"),
)


@dataclass(frozen=True)
class Geometry:
    """Stepped-channel geometry: a rectangle with wall-mounted obstacles.

    ``step_spans`` holds (x_start, x_end, wall) triples; "top" steps
    protrude downward with height ``H1``, "bottom" steps upward with
    height ``H2``. An empty tuple gives a plain rectangular channel.
    """

    L: float = 0.2
    H: float = 0.02
    H1: float = 0.006
    H2: float = 0.008
    step_spans: tuple = field(default_factory=lambda: DEFAULT_STEP_SPANS)

    def __post_init__(self):
        if not (self.L > 0 and self.H > 0):
            raise ValueError("channel dimensions must be positive")
        if not (0 < self.H1 < self.H and 0 < self.H2 < self.H):
            raise ValueError("step heights must lie in (0, H)")
        spans = tuple((float(a), float(b), str(w)) for a, b, w in self.step_spans)
        object.__setattr__(self, "step_spans", spans)
        for x0, x1, wall in spans:
            if wall not in ("top", "bottom"):
                raise ValueError(f"unknown wall tag {wall!r}")
            if not (0.0 < x0 < x1 < self.L):
                raise ValueError(f"step span ({x0}, {x1}) must lie inside (0, L)")
        ordered = sorted(spans)
        for (a0, a1, _), (b0, b1, _) in zip(ordered, ordered[1:]):
            if b0 < a1:
                raise ValueError("step spans must not overlap")
        if spans:
            n_top = sum(1 for s in spans if s[2] == "top")
            n_bottom = len(spans) - n_top
            if (n_top, n_bottom) != (2, 1):
                raise ValueError(
                    f"expected two top steps and one bottom step, "
                    f"got {n_top} top / {n_bottom} bottom "
                    f"(pass step_spans=() for a plain channel)")

    def plain(self) -> "Geometry":
        """Same channel without obstacles."""
        return Geometry(self.L, self.H, self.H1, self.H2, step_spans=())
