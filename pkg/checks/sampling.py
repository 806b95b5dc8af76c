"""Random Bohr-Sommerfeld samples and fields for the scenario checks"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from cycles import CurveSpec, HalfWeightedCycle, make_half_weighted, sample_cycle
from surfaces import ScalarField, SurfaceModel, SymplecticSurface, random_poly_field, random_trig_field
from utils import ConfigError

# Harmonic content of the random samples
DEFAULT_CYCLE_PARAMS = {'count': 20, 'modes': 3, 'amplitude': 0.05, 'weight_amplitude': 0.3}
DEFAULT_FIELD_PARAMS = {'count': 10, 'degree': 2, 'amplitude': 1.0}
POLE_CLEARANCE = 0.6


@dataclass(frozen=True)
class SampleRecipe:
    """A random half-weighted BS cycle, kept resolution-free so it can be sampled at any N"""
    spec: CurveSpec
    weight_terms: Tuple[Tuple[int, float, float], ...]
    weight_amplitude: float

    def build(self, surface: SymplecticSurface, n: int) -> HalfWeightedCycle:
        cycle = sample_cycle(surface, self.spec, n)
        s = cycle.params
        log_weight = np.zeros(n)
        for m, a, b in self.weight_terms:
            log_weight += a * np.cos(2 * np.pi * m * s) + b * np.sin(2 * np.pi * m * s)
        return make_half_weighted(cycle, np.exp(self.weight_amplitude * log_weight))


def _random_terms(rng: np.random.Generator, modes: int) -> Tuple[Tuple[int, float, float], ...]:
    coeffs = rng.normal(size=(modes, 2))
    return tuple((m + 1, float(a) / (m + 1), float(b) / (m + 1)) for m, (a, b) in enumerate(coeffs))


def random_recipe(surface: SymplecticSurface, rng: np.random.Generator, params: Dict) -> SampleRecipe:
    modes = int(params.get('modes', DEFAULT_CYCLE_PARAMS['modes']))
    amplitude = float(params.get('amplitude', DEFAULT_CYCLE_PARAMS['amplitude']))
    k = surface.level
    if surface.model is SurfaceModel.FLAT_TORUS:
        # y = m/k + zero-mean harmonics has action -m, an integer
        m = int(rng.integers(0, k))
        terms = [(mode, amplitude * a, amplitude * b) for mode, a, b in _random_terms(rng, modes)]
        spec = CurveSpec('graph', {'c': m / k, 'terms': terms})
    else:
        if k < 2:
            raise ConfigError("Random sphere samples need level >= 2 (a BS circle encloses area 1..k-1)")
        m = int(rng.integers(1, k // 2 + 1))
        radius = float(np.arccos(1.0 - 2.0 * m / k))
        # keep the circle POLE_CLEARANCE away from the south pole
        polar = rng.uniform(0.0, np.pi - POLE_CLEARANCE - radius)
        azimuth = rng.uniform(0.0, 2.0 * np.pi)
        center = (np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar))
        spec = CurveSpec('circle', {'center': center, 'radius': radius})
    weight_amplitude = float(params.get('weight_amplitude', DEFAULT_CYCLE_PARAMS['weight_amplitude']))
    return SampleRecipe(spec, _random_terms(rng, modes), weight_amplitude)


def random_recipes(surface: SymplecticSurface, seed: int, params: Dict) -> List[SampleRecipe]:
    rng = np.random.default_rng(seed)
    count = int(params.get('count', DEFAULT_CYCLE_PARAMS['count']))
    return [random_recipe(surface, rng, params) for _ in range(count)]


def random_field(surface: SymplecticSurface, seed: int, params: Dict) -> ScalarField:
    degree = int(params.get('degree', DEFAULT_FIELD_PARAMS['degree']))
    amplitude = float(params.get('amplitude', DEFAULT_FIELD_PARAMS['amplitude']))
    if surface.model is SurfaceModel.FLAT_TORUS:
        return random_trig_field(seed, degree, amplitude)
    return random_poly_field(seed, degree, amplitude)


def random_field_pairs(surface: SymplecticSurface, seed: int, params: Dict) -> List[Tuple[ScalarField, ScalarField]]:
    count = int(params.get('count', DEFAULT_FIELD_PARAMS['count']))
    return [
        (random_field(surface, seed + 2 * i, params), random_field(surface, seed + 2 * i + 1, params))
        for i in range(count)
    ]
