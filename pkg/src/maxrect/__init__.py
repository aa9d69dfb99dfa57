"""Largest rectangle of arbitrary orientation inside a polygon with holes."""

from .geom import RectSpec
from .polygon import InvalidPolygon, PolygonShape

__all__ = ["PolygonShape", "InvalidPolygon", "RectSpec"]
