import argparse
import concurrent.futures
import itertools
import json
import sys
import typing
from collections.abc import Iterator
from pathlib import Path
from typing import TypeAlias
from collections.abc import MutableMapping

from tqdm import tqdm

from ahsm.cli import standard_generator_parser
from ahsm.modelfile import dump_model, parse_model
from ahsm.seriesgen import (
    HierarchyKind,
    PerturbedPDE,
    generate_ahsm,
    generate_ahsm_raw,
    generate_asm,
)
import pathlib

# (filename, pde, kind, order)
HierarchyExportStrategy: TypeAlias = Iterator[
    tuple[str, PerturbedPDE, HierarchyKind, int]
]


class HierarchyExportScript:
    """
    An interactive program to generate hierarchies for a stream of pdes and
    save them as JSON.

    The first (and only) positional argument must be a directory to save the
    hierarchies to. The --verbose, --dry-run and --overwrite flags are optional.

    The strategy passed in must be an iterator of
    (filename, PerturbedPDE, HierarchyKind, order) tuples. Each pde travels to
    the worker processes as model file text, and the saved file holds that text
    so the hierarchy can be regenerated.

    The script is executed through the .run() method.
    """

    def __init__(self, export_strategy: HierarchyExportStrategy) -> None:
        self.strategy: HierarchyExportStrategy = export_strategy
        self.opts: MutableMapping = dict()

        # pyre-ignore[8]:
        self.data_dir: pathlib.Path = None

    def __call__(self) -> None:
        self.run()

    def run(self) -> None:
        self._parse_args()
        self._confirm_overwrite()

        jobs = (
            (filename, dump_model(pde), kind.value, order)
            for filename, pde, kind, order in self.strategy
        )

        with concurrent.futures.ProcessPoolExecutor() as executor:
            results = executor.map(
                HierarchyExportScript._generate_and_save,
                itertools.repeat(self.opts),
                itertools.repeat(self.data_dir),
                jobs,
            )

            for result in tqdm(results, desc="hierarchies"):
                pass

    @staticmethod
    def _generate_and_save(
        opts: MutableMapping, data_dir: Path, job: tuple[str, str, str, int]
    ) -> str:
        filename, model, kind, order = job
        pde = parse_model(model).to_pde()
        h = HierarchyExportScript._generate(pde, HierarchyKind(kind), order)

        if not opts["dry_run"]:
            document = {
                "model": model,
                "kind": kind,
                "order": order,
                "equations": json.loads(h.to_json()),
            }
            (data_dir / filename).write_text(json.dumps(document, indent=2) + "\n")
        print(f"{data_dir / filename}")

        return filename

    @staticmethod
    def _generate(pde: PerturbedPDE, kind: HierarchyKind, order: int):
        if kind is HierarchyKind.ASM:
            return generate_asm(pde, order)
        if kind is HierarchyKind.AHSM_RAW:
            return generate_ahsm_raw(pde, order)
        return generate_ahsm(pde, order)

    def _parse_args(self) -> None | typing.NoReturn:
        parser = argparse.ArgumentParser(
            description=__doc__, parents=[standard_generator_parser()]
        )

        parser.add_argument(
            "data_dir", help="the directory to save generated hierarchies to."
        )
        self.opts = vars(parser.parse_args())
        self.data_dir = Path(self.opts["data_dir"])

        if not self.data_dir.exists():
            self.data_dir.mkdir(parents=True, exist_ok=True)

    def _confirm_overwrite(self) -> None | typing.NoReturn:
        # if overwrite is set to be true, do not ask
        # if overwrite is set to be false, quit
        # if overwrite unspecified, ask the user

        if _is_dir_empty(self.data_dir):
            return

        if self.opts["overwrite"] is True:
            _empty_data_directory(self.data_dir)
            return

        if self.opts["overwrite"] is None and _confirm_choice(
            "The data directory is not empty. Overwrite?"
        ):
            _empty_data_directory(self.data_dir)
            return

        print("Error: data directory is not empty.")
        sys.exit(1)

    def set_export_strategy(self, export_strategy: HierarchyExportStrategy) -> None:
        self.strategy = export_strategy


def _empty_data_directory(data_dir: Path) -> None:
    for f in data_dir.iterdir():
        if f.is_file():
            f.unlink()


def _confirm_choice(msg: str) -> bool:
    answer = input(f"{msg} [y/n] (default: n) ")
    return answer.lower() in ["y", "yes"]


def _is_dir_empty(path: Path) -> bool:
    return next(path.iterdir(), None) is None
