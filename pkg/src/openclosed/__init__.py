"""Exact open/closed correspondence toolkit for toric Calabi-Yau 3-orbifolds with a framed outer brane."""
from importlib import resources
from pathlib import Path
import json

from .open_geometry import GeometryInput, build_fan
from .closed_geometry import extend
from .charges import build_charges

BUNDLED = ("c3_f1", "c3_f1_2", "kp2_f1")


def load_bundled(name: str) -> GeometryInput:
    text = resources.files(__package__).joinpath("data", f"{name}.json").read_text()
    return GeometryInput.from_dict(json.loads(text))


def load_input(source) -> GeometryInput:
    """A GeometryInput from a dict, a JSON file path or a bundled example name."""
    if isinstance(source, GeometryInput):
        return source
    if isinstance(source, dict):
        return GeometryInput.from_dict(source)
    if source in BUNDLED:
        return load_bundled(source)
    return GeometryInput.from_dict(json.loads(Path(source).read_text()))


def pipeline(inp: GeometryInput):
    """(fan3, fan4, charges) for a geometry input."""
    fan3 = build_fan(inp)
    fan4 = extend(fan3)
    return fan3, fan4, build_charges(fan3, fan4)


__all__ = ["BUNDLED", "GeometryInput", "load_bundled", "load_input", "pipeline"]
