try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from .typing import PathLike
from pathlib import Path
from collections.abc import MutableMapping


def load_experiment_config(dir: PathLike, name: str) -> MutableMapping:
    """
    Load the parameters of an experiment from ``<dir>/<name>.toml``.

    Numbers that must stay exact (evaluation points, theta grids) are written
    as strings in these files.
    """

    with open(Path(dir) / f"{name}.toml", "rb") as f:
        config = tomllib.load(f)
    return config
