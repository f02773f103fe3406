"""Run configuration for the mixture sampler and CLI."""

from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    depth: int | None = None  # None: ceil(log2 p)
    cor_layers: int = 4
    n_clusters: int = 3
    burn_in: int = 100
    n_keep: int = 50
    alpha0: float = 1.0  # tail variance InvGamma shape
    sigma2_mu: float = 1.0  # prior variance of head mean entries
    sigma2_mu_tail: float = 0.1  # prior variance of tail mean entries
    dp_alpha: float = 1.0  # DP concentration, fixed
    ind_tree: bool = False
    seed: int = 0
    threads: int = 1
    init: str = "pam"  # pam | kmeans | file:<path> | discretize:<path>
    report_min_size: int = 10
    pg_b_exact: int = 200
    ghs_sweeps: int = 1
    ghs_diag_rate: float = 2.0  # Exp prior rate on precision diagonals
    trace_psi: bool = False

    def validate(self, p=None):
        if self.n_clusters < 1:
            raise ConfigError("need at least one cluster")
        if self.burn_in < 0 or self.n_keep < 1:
            raise ConfigError("need burn_in >= 0 and n_keep >= 1 iterations")
        if self.cor_layers < 1:
            raise ConfigError("need at least one correlated layer")
        if self.depth is not None and self.cor_layers > self.depth:
            raise ConfigError(
                f"correlated layers {self.cor_layers} exceed depth {self.depth}"
            )
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.ghs_diag_rate < 0:
            raise ConfigError("ghs_diag_rate must be >= 0")
        return self


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name, kind, raw):
    raw = raw.strip()
    if kind == "bool":
        low = raw.lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise ConfigError(f"bad boolean for {name}: {raw!r}")
    if raw.lower() == "none":
        return None
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def load_config_file(path):
    """Flat key=value text file -> dict of typed RunConfig overrides."""
    known = {f.name: f for f in fields(RunConfig)}
    kinds = {
        int: "int",
        float: "float",
        bool: "bool",
        str: "str",
    }
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        default = getattr(RunConfig, key, None)
        kind = "int" if key == "depth" else kinds.get(type(default), "str")
        out[key] = _coerce(key, kind, raw)
    return out


def merge_config(file_overrides=None, flag_overrides=None):
    """Precedence: flags > config file > defaults."""
    values = {}
    values.update(file_overrides or {})
    values.update({k: v for k, v in (flag_overrides or {}).items() if v is not None})
    return RunConfig(**values)
