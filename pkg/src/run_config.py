#!/usr/bin/env python
"""
RunConfig: every parameter of one germext invocation, merged from the
config file and command-line flags (flags win).
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

from .kmaps import BUMP, POINTWISE
from .verify import ProbeConfig

logger = logging.getLogger(__name__)

DEMO_EXTEND = "demo-extend"
DEMO_BOREL = "demo-borel"
VERIFY = "verify"
PROBE_C1 = "probe-c1"
COMMANDS = (DEMO_EXTEND, DEMO_BOREL, VERIFY, PROBE_C1)

# command-line flags that override a config file value of the same name
OVERRIDE_FLAGS = ("d", "D", "p", "a", "b", "rho_in", "rho_out", "kmap_kind", "eps", "budget", "J", "seed", "out")
# base K-maps a Borel series can be built on
KMAP_KINDS = (POINTWISE, BUMP)


@dataclass(frozen=True)
class RunConfig:
    command: str = VERIFY
    d: int = 65
    D: int = 64
    p: int = 4
    n: int = 1
    pvec_d: int = 16
    borel_d: int = 8
    cert_d: int = 64
    kmap_kind: str = "pointwise"
    a: float = 1.0 / 3.0
    b: float = 0.5
    rho_in: float = 0.5
    rho_out: float = 1.0
    max_deriv_order: int = 6
    eps: Optional[float] = None
    budget: float = 1.0
    J: int = 4
    terms: int = 2
    directions: int = 20
    seed: int = 0
    trials: int = 10000
    identity_trials: int = 1000
    base_step: float = 0.01
    levels: int = 4
    tol_jet: float = 1e-6
    tol_fd: float = 1e-6
    tol_agreement: float = 1e-12
    tol_sup: float = 1e-12
    c1_degree: int = 128
    c1_frequencies: Tuple[float, ...] = (4.0, 8.0, 16.0, 32.0)
    c1_amplitude: float = 0.25
    suites: Tuple[str, ...] = field(default_factory=tuple)
    out: Optional[str] = None
    jet_path: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}', expected one of {COMMANDS}")
        for name in ("d", "D", "p", "pvec_d", "borel_d", "cert_d", "a", "b", "rho_in", "rho_out", "budget",
                     "terms", "directions", "trials", "identity_trials", "base_step", "levels",
                     "c1_degree", "c1_amplitude"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.eps is not None and not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.J < 0 or self.seed < 0:
            raise ValueError(f"J and seed must be >= 0, got J={self.J}, seed={self.seed}")
        if self.kmap_kind not in KMAP_KINDS:
            raise ValueError(f"Unknown K-map kind '{self.kmap_kind}', expected one of {KMAP_KINDS}")
        if not self.a < self.b:
            raise ValueError(f"Need a < b, got a={self.a}, b={self.b}")
        if not self.rho_in < self.rho_out:
            raise ValueError(f"Need rho_in < rho_out, got {self.rho_in}, {self.rho_out}")
        if self.command == DEMO_EXTEND and (self.d < 3 or self.d % 2 == 0):
            raise ValueError(f"{DEMO_EXTEND} needs an odd grid size d >= 3 for Simpson quadrature, got {self.d}")
        if self.command == DEMO_EXTEND and self.eps is not None and self.eps >= 1.0:
            raise ValueError(f"eps must lie below the unit domain radius, got {self.eps}")

    def kmap_descriptor(self, kind=None):
        """{"kind", "params"} descriptor for kmap_from_descriptor; kind defaults to kmap_kind"""
        kind = kind or self.kmap_kind
        if kind == POINTWISE:
            params = {"a": self.a, "b": self.b}
        else:
            params = {"rho_in": self.rho_in, "rho_out": self.rho_out}
        return {"kind": kind, "params": params}

    def probe_config(self, trials=None, norm_range=(1e-3, 1e3), offset=0):
        return ProbeConfig(trials or self.trials, norm_range, self.seed + offset)

    def params(self):
        """Parameters echoed into the report"""
        out = asdict(self)
        out.pop("command")
        out["c1_frequencies"] = list(self.c1_frequencies)
        out["suites"] = list(self.suites)
        return out

    @classmethod
    def from_sources(cls, manager, args):
        """Merge config file values with command-line flags.

        Args:
            manager: ConfigManager
            args: argparse Namespace; attributes left as None defer to the file

        Returns:
            RunConfig
        """
        get = manager.get
        values = {
            "command": args.command,
            "d": get("space", "d"),
            "D": get("space", "D"),
            "p": get("space", "p"),
            "n": get("space", "n"),
            "pvec_d": get("space", "pvec_d"),
            "borel_d": get("space", "borel_d"),
            "cert_d": get("space", "cert_d"),
            "kmap_kind": get("kmap", "kind"),
            "a": get("kmap", "a"),
            "b": get("kmap", "b"),
            "rho_in": get("kmap", "rho_in"),
            "rho_out": get("kmap", "rho_out"),
            "max_deriv_order": get("kmap", "max_deriv_order"),
            "eps": get("extension", "eps"),
            "budget": get("borel", "budget"),
            "J": get("borel", "J"),
            "terms": get("borel", "terms"),
            "directions": get("borel", "directions"),
            "seed": get("verify", "seed"),
            "trials": get("verify", "trials"),
            "identity_trials": get("verify", "identity_trials"),
            "base_step": get("verify", "base_step"),
            "levels": get("verify", "levels"),
            "tol_jet": get("tolerances", "jet"),
            "tol_fd": get("tolerances", "fd"),
            "tol_agreement": get("tolerances", "agreement"),
            "tol_sup": get("tolerances", "sup"),
            "c1_degree": get("c1_probe", "D"),
            "c1_amplitude": get("c1_probe", "amplitude"),
            "out": get("output", "path"),
            "jet_path": get("borel", "jet"),
        }
        freqs = get("c1_probe", "frequencies")
        if freqs is not None:
            values["c1_frequencies"] = tuple(float(f) for f in freqs)
        enabled = get("suites", "enabled")
        if enabled is not None:
            values["suites"] = tuple(enabled)

        for flag in OVERRIDE_FLAGS:
            flag_value = getattr(args, flag, None)
            if flag_value is not None:
                values[flag] = flag_value
        tol = getattr(args, "tol", None)
        if tol is not None:
            values["tol_jet"] = tol
            values["tol_fd"] = tol
        jet = getattr(args, "jet", None)
        if jet is not None:
            values["jet_path"] = jet

        values = {k: v for k, v in values.items() if v is not None}
        config = cls(**values)
        logger.debug(f"Run configuration: {config}")
        return config
