"""
On-disk profile cache (.npz) keyed by (model, c, grid)
"""

import hashlib
from pathlib import Path
from typing import Optional

import numpy as np

from ..grid.spectral_grid import Grid
from ..models.nonlinearity import NonlinearityModel
from ..observability.log_setup import get_logger
from .traveling_wave import TravelingWave, assemble_wave

logger = get_logger("profile.cache")


class ProfileCache:
    """Stores sampled eta_c; everything else is re-derived on load"""

    def __init__(self, directory: str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def cache_key(model: NonlinearityModel, c: float, grid: Grid) -> str:
        raw = f"{model.key}|{float(c).hex()}|{grid.key}"
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:24]

    def path(self, model: NonlinearityModel, c: float, grid: Grid) -> Path:
        return self.directory / f"profile_{self.cache_key(model, c, grid)}.npz"

    def get(self, model: NonlinearityModel, c: float, grid: Grid) -> Optional[TravelingWave]:
        path = self.path(model, c, grid)
        if not path.exists():
            return None
        try:
            with np.load(path) as data:
                eta = np.array(data["eta"])
                xi = float(data["xi"])
                x_turn = float(data["turning_x"])
        except (OSError, KeyError, ValueError) as e:
            logger.warning(f"ignoring unreadable cache entry {path.name}: {e}")
            return None
        return assemble_wave(model, c, grid, eta, xi, x_turn)

    def put(self, wave: TravelingWave) -> Path:
        path = self.path(wave.model, wave.c, wave.grid)
        np.savez(path, eta=wave.eta, xi=wave.xi, turning_x=wave.turning_x,
                 c=wave.c, n=wave.grid.n, L=wave.grid.L)
        return path
