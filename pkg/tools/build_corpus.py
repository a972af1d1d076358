"""Regenerate the bundled JSON instances and their expected-report fixtures."""

from pathlib import Path

from ainftycat.corpus import BUILDERS
from ainftycat.fixtures import dumps_report
from ainftycat.io import dumps

DATA = Path(__file__).resolve().parents[1] / "src" / "ainftycat" / "data"


def main() -> None:
    (DATA / "corpus").mkdir(parents=True, exist_ok=True)
    (DATA / "expected").mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        (DATA / "corpus" / f"{name}.json").write_text(dumps(build()))
    # reports are computed from the files just written
    for name in BUILDERS:
        (DATA / "expected" / f"{name}.json").write_text(dumps_report(name))
        print(name)


if __name__ == "__main__":
    main()
