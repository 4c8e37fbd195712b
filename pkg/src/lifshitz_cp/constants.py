"""Physical constants in Gaussian (CGS) units."""
from dataclasses import dataclass

from scipy import constants as _si


@dataclass(frozen=True)
class PhysicalConstants:
    k_B: float = _si.k * 1e7  # erg/K
    hbar: float = _si.hbar * 1e7  # erg s
    c: float = _si.c * 1e2  # cm/s
    e: float = _si.e * _si.c * 10.0  # statC
    eV: float = _si.eV * 1e7  # erg

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    def ev_to_rad_s(self, energy_ev: float) -> float:
        """Angular frequency corresponding to an energy quantum in eV."""
        return energy_ev * self.eV / self.hbar

    def ev_to_erg(self, energy_ev: float) -> float:
        return energy_ev * self.eV


CONSTANTS = PhysicalConstants()

#: Bohr radius cubed, the atomic unit of polarizability (cm^3).
BOHR3 = (_si.physical_constants["Bohr radius"][0] * 1e2) ** 3
