class GeometryError(Exception):
    """Base class for every failure raised by the geometry services."""


class NearLightCone(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


class Masked(GeometryError):
    pass


class OnLD(GeometryError):
    """The induced metric is degenerate at the point, so the unit normal is undefined."""


class ZeroRho(GeometryError, ZeroDivisionError):
    pass
