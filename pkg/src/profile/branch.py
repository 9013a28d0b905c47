"""
Traveling-wave branch c -> Q_c on a fixed grid, with memoized profiles
"""

from collections import OrderedDict
from typing import Optional

import numpy as np

from ..config import settings
from ..grid.spectral_grid import Grid
from ..grid.states import HydroState
from ..models.nonlinearity import NonlinearityModel, sound_speed
from .cache import ProfileCache
from .traveling_wave import TravelingWave, build_profile


class ProfileBranch:
    """Profiles of one model on one grid, memoized by exact speed"""

    def __init__(self, model: NonlinearityModel, grid: Grid, cache: Optional[ProfileCache] = None,
                 max_entries: int = 64):
        self.model = model
        self.grid = grid
        self.c_s = sound_speed(model)
        self._memory: "OrderedDict[float, TravelingWave]" = OrderedDict()
        self._max_entries = max_entries
        if cache is None and settings.profile_cache_dir:
            cache = ProfileCache(settings.profile_cache_dir)
        self._cache = cache

    def nu(self, c: float) -> float:
        return float(np.sqrt(self.c_s ** 2 - c * c))

    def wave(self, c: float) -> TravelingWave:
        """Q_c on the branch grid"""
        c = float(c)
        hit = self._memory.get(c)
        if hit is not None:
            self._memory.move_to_end(c)
            return hit
        wave = self._cache.get(self.model, c, self.grid) if self._cache else None
        if wave is None:
            wave = build_profile(self.model, c, self.grid)
            if self._cache:
                self._cache.put(wave)
        self._memory[c] = wave
        if len(self._memory) > self._max_entries:
            self._memory.popitem(last=False)
        return wave

    def speed_step(self, c: float) -> float:
        return 1e-4 * self.nu(c)

    def speed_derivative(self, c: float) -> HydroState:
        """d_c Q_c by centered differences with step 1e-4 nu_c"""
        dc = self.speed_step(c)
        upper = self.wave(c + dc)
        lower = self.wave(c - dc)
        return HydroState((upper.eta - lower.eta) / (2.0 * dc), (upper.v - lower.v) / (2.0 * dc), self.grid)
