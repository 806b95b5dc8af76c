from surfaces.base import SurfaceModel, SurfacePoint, SymplecticSurface
from surfaces.fields import (
    PolyField,
    ScalarField,
    TorusCoordinate,
    TrigField,
    random_poly_field,
    random_trig_field,
    section_norm_field,
)
from surfaces.sphere import RoundSphere
from surfaces.torus import FlatTorus

__all__ = [
    'SurfaceModel', 'SurfacePoint', 'SymplecticSurface',
    'ScalarField', 'TrigField', 'PolyField', 'TorusCoordinate',
    'random_trig_field', 'random_poly_field', 'section_norm_field',
    'FlatTorus', 'RoundSphere', 'make_surface',
]

_MODELS = {
    SurfaceModel.FLAT_TORUS: FlatTorus,
    SurfaceModel.ROUND_SPHERE: RoundSphere,
}


def make_surface(model, level: int) -> SymplecticSurface:
    """Build a model surface at integer level k (total area k)"""
    return _MODELS[SurfaceModel.parse(model)](level)
