"""Numerical thresholds, overridable from the command line."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    tau_reg: float = 1e-8      # |f_u x f_v| or |f_u x h| below this is degenerate
    tau_sing: float = 1e-10    # |lambda| at a polished singular point
    tau_axis: float = 1e-9     # axis coefficients for the division f_v = v h
    tau_crit: float = 1e-6     # |eta lambda| / |grad lambda| in the cuspidal edge test
    tau_bound: float = 1e-7    # kappa_nu and kappa_t "identically zero"
    tau_cusp: float = 1e-7     # ordinary cusp determinant, dimensionless
    tau_K: float = 1e-6        # closed form vs numeric limit of K
    tau_mu: float = 1e-4       # relative agreement of the two mu values
    tau_point: float = 1e-8    # diameter of a degenerate Gauss locus
    tau_id: float = 1e-6       # residuals of frame identities
    tau_zero: float = 1e-6     # zero test for finite-difference derived values
    tau_front: float = 1e-8    # |d nu (eta)| below this: not a front

    def as_dict(self) -> dict:
        return asdict(self)

    def override(self, **changes) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = set(changes) - known
        if bad:
            raise KeyError(f"unknown tolerance(s): {sorted(bad)}")
        return replace(self, **{k: float(v) for k, v in changes.items() if v is not None})


DEFAULT = Tolerances()
