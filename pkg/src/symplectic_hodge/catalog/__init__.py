"""Built-in symplectic models with committed regression fixtures.

Each entry is a model file under ``models/`` and the JSON report it produced
at lambda = 1 under ``fixtures/``. Fixtures are regenerated with
:func:`write_fixtures` and must re-derive byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..exterior import Form
from ..lie_model import LieModel, ModelError, load_model, validate
from ..symplectic import validate_symplectic

_ROOT = resources.files(__package__)


class UnknownModelError(ModelError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    model: LieModel
    omega: Form
    provenance: str
    fixture: str

    @property
    def model_text(self) -> str:
        return (_ROOT / "models" / f"{self.id}.json").read_text(encoding="utf-8")

    def fixture_text(self) -> str:
        return (_ROOT / self.fixture).read_text(encoding="utf-8")

    def check(self) -> list[str]:
        """Validation messages; empty when the entry is usable."""
        msgs = list(validate(self.model).messages)
        msgs += validate_symplectic(self.model, self.omega).messages
        return msgs


def ids() -> list[str]:
    return sorted(p.name[:-5] for p in (_ROOT / "models").iterdir() if p.name.endswith(".json"))


def get(model_id: str) -> CatalogEntry:
    if model_id not in ids():
        raise UnknownModelError(f"unknown catalog model {model_id!r}; known: {', '.join(ids())}")
    text = (_ROOT / "models" / f"{model_id}.json").read_text(encoding="utf-8")
    model = load_model(text)
    return CatalogEntry(
        id=model_id,
        model=model,
        omega=model.omega,
        provenance=model.comment,
        fixture=f"fixtures/{model_id}.json",
    )


def entries() -> list[CatalogEntry]:
    return [get(i) for i in ids()]


def render_fixture(entry: CatalogEntry) -> str:
    from ..cohomology import euler_report
    from ..operators import OperatorSuite

    return euler_report(OperatorSuite(entry.model)).to_json()


def write_fixtures(directory: str | Path | None = None) -> list[Path]:
    out_dir = Path(directory) if directory is not None else Path(str(_ROOT)) / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in entries():
        path = out_dir / f"{entry.id}.json"
        path.write_text(render_fixture(entry), encoding="utf-8")
        written.append(path)
    return written
