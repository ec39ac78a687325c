"""Experiment configuration: one record per model, defaults are the reference hyperparameters."""

import configparser
import enum
import logging
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional, Tuple

from ..exceptions import ConfigurationError

log = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_TRACE_INTERVAL = 100


class Model(enum.Enum):
    GRU_SVM = "gru-svm"
    LINREG = "linreg"
    MLP = "mlp"
    NN_L1 = "nn-l1"
    NN_L2 = "nn-l2"
    SOFTMAX = "softmax"
    SVM = "svm"

    @property
    def display_name(self):
        return DISPLAY_NAMES[self]

    @property
    def trained(self):
        return self not in (Model.NN_L1, Model.NN_L2)

    @classmethod
    def parse(cls, name):
        key = str(name).strip().lower().replace("_", "-")
        key = ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown model {name!r}; choose from {choices}") from None


DISPLAY_NAMES = {
    Model.GRU_SVM: "GRU-SVM",
    Model.LINREG: "Linear Regression",
    Model.MLP: "MLP",
    Model.NN_L1: "L1-NN",
    Model.NN_L2: "L2-NN",
    Model.SOFTMAX: "Softmax Regression",
    Model.SVM: "SVM",
}
ALIASES = {
    "grusvm": "gru-svm", "gru": "gru-svm", "linear-regression": "linreg",
    "l1-nn": "nn-l1", "l2-nn": "nn-l2", "softmax-regression": "softmax",
}

_COMMON = {"model", "seed", "split_ratio", "standardization", "positive_class"}
_TRAINED = {"batch_size", "steps", "learning_rate", "trace_interval"}
RELEVANT = {
    Model.GRU_SVM: _COMMON | _TRAINED | {"cell_size", "dropout_keep", "svm_c", "norm"},
    Model.LINREG: _COMMON | _TRAINED,
    Model.MLP: _COMMON | _TRAINED | {"hidden_sizes"},
    Model.NN_L1: _COMMON | {"norm"},
    Model.NN_L2: _COMMON | {"norm"},
    Model.SOFTMAX: _COMMON | _TRAINED,
    Model.SVM: _COMMON | _TRAINED | {"svm_c", "norm"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    model: Model
    seed: int = DEFAULT_SEED
    split_ratio: float = 0.7
    standardization: str = "full"
    positive_class: int = 1
    batch_size: Optional[int] = None
    steps: Optional[int] = None
    learning_rate: Optional[float] = None
    trace_interval: Optional[int] = None
    cell_size: Optional[int] = None
    hidden_sizes: Optional[Tuple[int, ...]] = None
    dropout_keep: Optional[float] = None
    svm_c: Optional[float] = None
    norm: Optional[str] = None

    @property
    def name(self):
        return self.model.display_name

    def with_overrides(self, **overrides):
        """Return a copy with non-None ``overrides`` applied (fields outside the model are kept but ignored)."""
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **coerce_fields(clean))

    def ignored_fields(self):
        return sorted(
            f.name for f in fields(self)
            if f.name not in RELEVANT[self.model] and getattr(self, f.name) is not None
        )

    def validate(self, n_samples=None):
        """Raise :class:`ConfigurationError` on invalid values; warn about fields the model does not use."""
        for name in self.ignored_fields():
            log.warning("%s: %s is not used by this model and is ignored", self.name, name)
        if not 0.0 < self.split_ratio < 1.0:
            raise ConfigurationError(f"split_ratio must lie in (0, 1), got {self.split_ratio}")
        if self.standardization not in ("full", "train"):
            raise ConfigurationError(
                f"standardization must be 'full' or 'train', got {self.standardization!r}"
            )
        if self.positive_class not in (0, 1):
            raise ConfigurationError("positive_class must be 1 (malignant) or 0 (benign)")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        m = self.model
        if m.trained:
            if self.batch_size is None or self.batch_size < 1:
                raise ConfigurationError(f"batch_size must be at least 1, got {self.batch_size}")
            if self.steps is None or self.steps < 1:
                raise ConfigurationError(f"steps must be at least 1, got {self.steps}")
            if self.learning_rate is None or not self.learning_rate >= 0:
                raise ConfigurationError(f"learning_rate must be >= 0, got {self.learning_rate}")
            if self.trace_interval is not None and self.trace_interval < 0:
                raise ConfigurationError("trace_interval must be non-negative")
            if n_samples is not None:
                n_train = int(self.split_ratio * n_samples + 0.5)
                if self.batch_size > n_train:
                    raise ConfigurationError(
                        f"batch_size {self.batch_size} exceeds the {n_train} training samples"
                    )
        if m in (Model.GRU_SVM, Model.SVM):
            if self.svm_c is None or not self.svm_c > 0:
                raise ConfigurationError(f"svm_c must be positive, got {self.svm_c}")
            if self.norm not in ("l1", "l2"):
                raise ConfigurationError(f"SVM norm must be 'l1' or 'l2', got {self.norm!r}")
        if m is Model.GRU_SVM:
            if self.cell_size is None or self.cell_size < 1:
                raise ConfigurationError(f"cell_size must be at least 1, got {self.cell_size}")
            if self.dropout_keep is None or not 0.0 < self.dropout_keep <= 1.0:
                raise ConfigurationError(f"dropout_keep must lie in (0, 1], got {self.dropout_keep}")
        if m is Model.MLP:
            if not self.hidden_sizes or min(self.hidden_sizes) < 1:
                raise ConfigurationError(f"hidden_sizes must be positive, got {self.hidden_sizes}")
        if m is Model.NN_L1 and self.norm != "l1" or m is Model.NN_L2 and self.norm != "l2":
            raise ConfigurationError(f"{self.name} requires norm {m.value[-2:]}, got {self.norm!r}")
        return self

    def as_dict(self):
        d = {k: v for k, v in asdict(self).items() if k in RELEVANT[self.model]}
        d["model"] = self.model.value
        if d.get("hidden_sizes") is not None:
            d["hidden_sizes"] = list(d["hidden_sizes"])
        return d


def default_config(model, seed=DEFAULT_SEED):
    """Default hyperparameters for ``model``: batch 128, 3000 steps, lr 1e-3 (MLP 1e-2), C = 5."""
    model = Model.parse(model) if not isinstance(model, Model) else model
    trained = dict(batch_size=128, steps=3000, learning_rate=1e-3,
                   trace_interval=DEFAULT_TRACE_INTERVAL)
    extra = {
        Model.GRU_SVM: dict(trained, cell_size=128, dropout_keep=0.5, svm_c=5.0, norm="l2"),
        Model.LINREG: trained,
        Model.MLP: dict(trained, learning_rate=1e-2, hidden_sizes=(500, 500, 500)),
        Model.NN_L1: dict(norm="l1"),
        Model.NN_L2: dict(norm="l2"),
        Model.SOFTMAX: trained,
        Model.SVM: dict(trained, svm_c=5.0, norm="l2"),
    }[model]
    return ExperimentConfig(model=model, seed=seed, **extra)


def default_suite(seed=DEFAULT_SEED):
    return [default_config(m, seed) for m in Model]


_INT = {"seed", "batch_size", "steps", "trace_interval", "cell_size", "positive_class"}
_FLOAT = {"split_ratio", "learning_rate", "dropout_keep", "svm_c"}


def coerce_fields(values):
    """Convert string values (from files or flags) to each field's type."""
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for key, raw in values.items():
        if key not in known:
            raise ConfigurationError(f"unknown configuration key {key!r}")
        if key == "model":
            out[key] = raw if isinstance(raw, Model) else Model.parse(raw)
        elif key == "hidden_sizes":
            if isinstance(raw, str):
                raw = [p for p in raw.replace("-", ",").split(",") if p.strip()]
            try:
                out[key] = tuple(int(p) for p in raw)
            except ValueError:
                raise ConfigurationError(f"invalid hidden_sizes {raw!r}") from None
        elif key in _INT or key in _FLOAT:
            conv = int if key in _INT else float
            try:
                out[key] = conv(raw)
            except (TypeError, ValueError):
                raise ConfigurationError(f"{key} must be numeric, got {raw!r}") from None
        else:
            out[key] = str(raw).strip().lower()
    return out


def load_config_file(path):
    """Read experiments from a flat key-value file, one ``[section]`` per experiment.

    Each section names its ``model`` (the section name is used when the key
    is absent); unspecified keys take that model's defaults.
    """
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    configs = []
    for section in parser.sections():
        values = dict(parser.items(section))
        model = Model.parse(values.pop("model", section))
        cfg = default_config(model)
        configs.append(replace(cfg, **coerce_fields(values)))
    if not configs:
        raise ConfigurationError(f"{path} defines no experiments")
    return configs


def dump_config_file(configs, path):
    parser = configparser.ConfigParser()
    for i, cfg in enumerate(configs):
        section = cfg.model.value if cfg.model.value not in parser else f"{cfg.model.value}-{i}"
        parser[section] = {
            k: ",".join(map(str, v)) if isinstance(v, list) else str(v)
            for k, v in cfg.as_dict().items() if v is not None
        }
    with open(path, "w", encoding="utf-8") as fh:
        parser.write(fh)
