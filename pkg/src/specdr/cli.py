"""Command line front end.

    specdr <method> --input FILE [options] --out DIR
    specdr rerun MANIFEST [--out DIR]

Each run writes CSV factor files, ``eigenvalues.csv``, ``quality.json`` and a
``manifest.json`` that is sufficient to repeat the run.
"""
import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import scipy

from . import __version__, kernels
from .cca import cca
from .coa import coa, drop_empty
from .errors import ConfigError, SpecdrError
from .io import (format_matrix, format_vector, ingest_table, read_matrix,
                 read_metric, write_text)
from .linalg import spd_factor
from .mca import mca
from .mds import embedding_stress, mds
from .pca import (PcaMethod, center, pca_core, pca_double_averaged,
                  pca_scaled_centered, quality_metrics, scale_columns)
from .pcaiv import Subspace, pcaiv, pcaiv_with_metrics
from .pcamet import pca_met, weighted_center

METHODS = ("pca", "pca-sc", "pca-da", "pcaiv", "pcamet", "coa", "cca", "mca", "mds")
EXIT_CODES = {"config": 2, "parse": 3, "input": 4, "numerical": 5}
THREADS_ENV = "SPECDR_THREADS"

_PRETREATMENT = {
    "pca": {"center", "scale"},
    "pcaiv": {"center", "scale"},
    "pcamet": {"center"},
    "cca": {"center"},
}


@dataclass
class JobConfig:
    method: str
    input: str
    out: str
    input_b: str = None
    rank: int = None
    backend: str = None
    oversampling: int = 5
    seed: int = 0
    center: bool = False
    scale: bool = False
    row_weights: str = None
    col_metric: str = None
    row_basis: str = None
    col_basis: str = None
    delimiter: str = ","
    header: str = "auto"
    row_labels: bool = False
    categorical: list = field(default_factory=list)
    drop_empty: bool = False

    @property
    def effective_backend(self):
        if self.backend is not None:
            return self.backend
        return "evd" if self.method == "mds" else "svd"

    def pca_method(self):
        return PcaMethod(self.effective_backend, self.rank, self.oversampling, self.seed)

    def validate(self):
        """Check method-specific requirements; touches no file contents."""
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.rank is not None and self.rank < 1:
            raise ConfigError("--rank must be a positive integer or -1 (all)")
        if self.effective_backend not in ("evd", "svd", "grp"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.effective_backend == "grp" and self.rank is None:
            raise ConfigError("the grp backend needs a finite --rank")
        if self.oversampling < 0:
            raise ConfigError("--oversampling must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")
        if self.header not in ("auto", "yes", "no"):
            raise ConfigError("--header must be auto, yes or no")
        if self.method == "cca" and not self.input_b:
            raise ConfigError("cca needs a second block (--input-b)")
        if self.method != "cca" and self.input_b:
            raise ConfigError(f"{self.method} takes a single --input")
        allowed = _PRETREATMENT.get(self.method, set())
        for flag in ("center", "scale"):
            if getattr(self, flag) and flag not in allowed:
                raise ConfigError(f"--{flag} is not available for {self.method}")
        if (self.row_basis or self.col_basis) and self.method != "pcaiv":
            raise ConfigError("--row-basis/--col-basis only apply to pcaiv")
        if (self.row_weights or self.col_metric) and self.method not in ("pcaiv", "pcamet"):
            raise ConfigError("--row-weights/--col-metric only apply to pcamet and pcaiv")
        if self.drop_empty and self.method != "coa":
            raise ConfigError("--drop-empty only applies to coa")
        if self.categorical and self.method not in ("mca", "pca", "pcaiv", "pcamet"):
            raise ConfigError("--categorical does not apply to " + self.method)
        paths = [self.input, self.input_b, self.row_weights, self.col_metric,
                 self.row_basis, self.col_basis]
        for p in paths:
            if p and not Path(p).is_file():
                raise ConfigError(f"no such file: {p}")
        return self

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


@dataclass
class ResultBundle:
    out: Path
    files: dict
    manifest: dict


def _header_flag(config):
    return {"auto": "auto", "yes": True, "no": False}[config.header]


def _ingest(config, path, categorical=()):
    return ingest_table(path, delimiter=config.delimiter, header=_header_flag(config),
                        row_labels=config.row_labels, categorical=categorical)


def _numeric(table, path):
    if table.matrix is None:
        raise ConfigError(f"{path} has no numeric columns")
    if table.blocks:
        raise ConfigError("categorical columns are only analysed by mca")
    return table.matrix


def _quality(res):
    report = quality_metrics(res).to_dict()
    report["eigenvalues"] = res.lam.tolist()
    report["rho_curve"] = [[r + 1, v] for r, v in enumerate(report["cumulative_quality"])]
    report["total_inertia"] = res.total_inertia
    return report


def _pca_files(res, row_ids, col_names):
    return {
        "components.csv": format_matrix(res.Y, row_ids),
        "axes.csv": format_matrix(res.V, col_names, id_name="variable"),
        "eigenvalues.csv": format_vector(res.lam, "eigenvalue"),
    }


def _pretreat(config, A):
    if config.center:
        A, _ = center(A)
    if config.scale:
        A = scale_columns(A)
    return A


def _run_pca_family(config):
    table = _ingest(config, config.input)
    A = _numeric(table, config.input)
    method = config.pca_method()
    extra = {}
    if config.method == "pca":
        res = pca_core(_pretreat(config, A), method)
    elif config.method == "pca-sc":
        res = pca_scaled_centered(A, method)
    elif config.method == "pca-da":
        res, dec = pca_double_averaged(A, method)
        extra["effects.json"] = json.dumps({
            "mean": dec.mean, "row_effects": dec.row_effects.tolist(),
            "col_effects": dec.col_effects.tolist()}, indent=2) + "\n"
    files = _pca_files(res, table.row_ids, table.numeric_names)
    files.update(extra)
    return files, _quality(res)


def _metric(path, dim):
    if path is None:
        return None
    M = read_metric(path)
    if M.shape[0] != dim:
        raise ConfigError(f"{path}: metric of size {M.shape[0]}, expected {dim}")
    return spd_factor(M)


def _run_pcaiv(config):
    table = _ingest(config, config.input)
    A = _pretreat(config, _numeric(table, config.input))
    E = Subspace(read_matrix(config.row_basis)) if config.row_basis else None
    F = Subspace(read_matrix(config.col_basis)) if config.col_basis else None
    if config.row_weights or config.col_metric:
        N = _metric(config.row_weights, A.shape[0])
        P = _metric(config.col_metric, A.shape[1])
        out = pcaiv_with_metrics(A, E, F, N, P, config.pca_method())
    else:
        out = pcaiv(A, E, F, config.pca_method())
    quality = _quality(out.pca)
    quality["theta"] = out.theta
    quality["degenerate"] = out.degenerate
    quality["pca_quality"] = [out.pca_quality(r + 1) for r in range(out.pca.k)]
    files = _pca_files(out.pca, table.row_ids, table.numeric_names)
    files["projected.csv"] = format_matrix(out.projected, table.row_ids,
                                           table.numeric_names)
    return files, quality


def _run_pcamet(config):
    table = _ingest(config, config.input)
    A = _numeric(table, config.input)
    N = _metric(config.row_weights, A.shape[0])
    P = _metric(config.col_metric, A.shape[1])
    if config.center:
        if N is not None and not N.is_diagonal:
            raise ConfigError("--center with pcamet needs diagonal row weights")
        A, _ = weighted_center(A, np.ones(A.shape[0]) if N is None else N.diag)
    res = pca_met(A, N, P, config.pca_method())
    return _pca_files(res, table.row_ids, table.numeric_names), _quality(res)


def _run_coa(config):
    table = _ingest(config, config.input)
    T = _numeric(table, config.input)
    rows = list(range(T.shape[0]))
    cols = list(range(T.shape[1]))
    if config.drop_empty:
        T, rows, cols = drop_empty(T)
    row_ids = [table.row_ids[i] for i in rows]
    col_names = [table.numeric_names[j] for j in cols]
    res = coa(T, config.pca_method())
    files = {
        "row_coords.csv": format_matrix(res.row_coords, row_ids),
        "col_coords.csv": format_matrix(res.col_coords, col_names, id_name="column"),
        "row_principal.csv": format_matrix(res.row_principal, row_ids),
        "col_principal.csv": format_matrix(res.col_principal, col_names, id_name="column"),
        "eigenvalues.csv": format_vector(res.lam, "eigenvalue"),
    }
    total = res.chi2_norm
    axis = (res.lam / total) if total > 0 else np.zeros_like(res.lam)
    quality = {
        "eigenvalues": res.lam.tolist(),
        "axis_quality": axis.tolist(),
        "cumulative_quality": np.cumsum(axis).tolist(),
        "rho_curve": [[r + 1, v] for r, v in enumerate(np.cumsum(axis).tolist())],
        "chi2_norm": res.chi2_norm,
        "chi2_statistic": res.chi2_statistic,
        "row_margins": res.row_margins.tolist(),
        "col_margins": res.col_margins.tolist(),
        "kept_rows": [int(i) for i in rows],
        "kept_cols": [int(j) for j in cols],
    }
    return files, quality


def _run_cca(config):
    ta = _ingest(config, config.input)
    tb = _ingest(config, config.input_b)
    A, B = _numeric(ta, config.input), _numeric(tb, config.input_b)
    if config.center:
        A, _ = center(A)
        B, _ = center(B)
    res = cca(A, B, config.pca_method())
    files = {
        "variates_a.csv": format_matrix(res.Y_a, ta.row_ids),
        "variates_b.csv": format_matrix(res.Y_b, tb.row_ids),
        "loadings_a.csv": format_matrix(res.U_a, ta.numeric_names, id_name="variable"),
        "loadings_b.csv": format_matrix(res.U_b, tb.numeric_names, id_name="variable"),
        "correlations.csv": format_vector(res.lam, "correlation"),
    }
    return files, {"correlations": res.lam.tolist()}


def _run_mca(config):
    categorical = config.categorical or "all"
    table = _ingest(config, config.input, categorical=categorical)
    blocks = [b.Z for b in table.blocks]
    names = []
    for var, block in zip(table.categorical_names, table.blocks):
        names.extend(f"{var}={cat}" for cat in block.category_labels)
    if table.matrix is not None:
        blocks.append(table.matrix)
        names.extend(table.numeric_names)
    res = mca(blocks, config.pca_method())
    files = _pca_files(res.pca, table.row_ids, names)
    quality = _quality(res.pca)
    quality["block_slices"] = [[s.start, s.stop] for s in res.block_slices]
    return files, quality


def _run_mds(config):
    table = _ingest(config, config.input)
    D = _numeric(table, config.input)
    if D.shape[0] != D.shape[1]:
        raise ConfigError(f"mds needs a square distance matrix, got {D.shape[0]}x{D.shape[1]}")
    r = config.rank if config.rank is not None else D.shape[0] - 1
    method = config.effective_backend
    if method == "grp":
        method = PcaMethod("grp", r, config.oversampling, config.seed)
    res = mds(D, r, method)
    files = {
        "coords.csv": format_matrix(res.X, table.row_ids),
        "eigenvalues.csv": format_vector(res.lam, "eigenvalue"),
    }
    quality = {
        "eigenvalues": res.lam.tolist(),
        "n_negative": res.n_negative,
        "negative_mass": res.negative_mass,
        "stress": embedding_stress(D, res.X),
    }
    return files, quality


_HANDLERS = {
    "pca": _run_pca_family, "pca-sc": _run_pca_family, "pca-da": _run_pca_family,
    "pcaiv": _run_pcaiv, "pcamet": _run_pcamet, "coa": _run_coa,
    "cca": _run_cca, "mca": _run_mca, "mds": _run_mds,
}


def run_job(config):
    """Validate ``config``, run the method and write the result bundle."""
    config.validate()
    t0 = time.perf_counter()
    files, quality = _HANDLERS[config.method](config)
    elapsed = time.perf_counter() - t0
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    files["quality.json"] = json.dumps(quality, indent=2) + "\n"
    for name, text in files.items():
        write_text(out / name, text)
    echo = asdict(config)
    for key in ("input", "input_b", "row_weights", "col_metric", "row_basis",
                "col_basis", "out"):
        if echo[key]:
            echo[key] = str(Path(echo[key]).resolve())
    manifest = {
        "tool": "specdr",
        "version": __version__,
        "config": echo,
        "backend": config.effective_backend,
        "seed": config.seed,
        "kernels": kernels.BACKEND,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": sys.version.split()[0],
        "outputs": sorted(files),
        "timings": {"run_seconds": elapsed},
    }
    write_text(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    return ResultBundle(out, {name: out / name for name in files}, manifest)


def rerun(manifest_path, out=None):
    """Repeat the run recorded in a manifest, optionally into another directory."""
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    config = JobConfig.from_dict(manifest["config"])
    if out is not None:
        config.out = str(out)
    return run_job(config)


def _rank(text):
    value = int(text)
    if value == -1:
        return None
    if value < 1:
        raise argparse.ArgumentTypeError("rank must be >= 1, or -1 for all")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="data table (CSV)")
    common.add_argument("--input-b", help="second block (cca)")
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--rank", type=_rank, default=None,
                        help="number of axes to keep; -1 keeps all (default)")
    common.add_argument("--backend", choices=("evd", "svd", "grp"), default=None,
                        help="spectral backend (default svd; evd for mds)")
    common.add_argument("--oversampling", type=int, default=5)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--center", action="store_true")
    common.add_argument("--scale", action="store_true")
    common.add_argument("--row-weights", help="row metric: weights or square SPD table")
    common.add_argument("--col-metric", help="column metric: weights or square SPD table")
    common.add_argument("--row-basis", help="basis of the component subspace (pcaiv)")
    common.add_argument("--col-basis", help="basis of the axis subspace (pcaiv)")
    common.add_argument("--delimiter", default=",")
    common.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    common.add_argument("--row-labels", action="store_true",
                        help="first column holds item identifiers")
    common.add_argument("--categorical", default="",
                        help="comma-separated categorical columns (mca: default all)")
    common.add_argument("--drop-empty", action="store_true",
                        help="coa: drop all-zero rows and columns first")

    parser = argparse.ArgumentParser(prog="specdr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in METHODS:
        sub.add_parser(name, parents=[common], help=f"run {name}")
    rr = sub.add_parser("rerun", help="repeat a run from its manifest.json")
    rr.add_argument("manifest")
    rr.add_argument("--out")
    return parser


def _config_from_args(args):
    categorical = [c.strip() for c in args.categorical.split(",") if c.strip()]
    return JobConfig(
        method=args.command, input=args.input, out=args.out, input_b=args.input_b,
        rank=args.rank, backend=args.backend, oversampling=args.oversampling,
        seed=args.seed, center=args.center, scale=args.scale,
        row_weights=args.row_weights, col_metric=args.col_metric,
        row_basis=args.row_basis, col_basis=args.col_basis,
        delimiter=args.delimiter, header=args.header, row_labels=args.row_labels,
        categorical=categorical, drop_empty=args.drop_empty)


def _limit_threads():
    value = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
    if count <= 0:
        return None
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=count)


def main(argv=None):
    args = build_parser().parse_args(argv)
    label = args.command
    try:
        limiter = _limit_threads()
        try:
            if args.command == "rerun":
                bundle = rerun(args.manifest, args.out)
            else:
                bundle = run_job(_config_from_args(args))
        finally:
            if limiter is not None:
                limiter.restore_original_limits()
    except SpecdrError as exc:
        msg = f"specdr {label}: error: {exc}"
        if exc.hint:
            msg += f"\n  hint: {exc.hint}"
        print(msg, file=sys.stderr)
        return EXIT_CODES.get(exc.family, 1)
    except OSError as exc:
        print(f"specdr {label}: error: {exc}", file=sys.stderr)
        return EXIT_CODES["parse"]
    print(f"wrote {len(bundle.files) + 1} files to {bundle.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
