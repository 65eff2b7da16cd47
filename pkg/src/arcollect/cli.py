"""Pipeline command-line interface.

    arcollect <command> --config <path> [--seed N] [--out DIR]

Commands: generate, featurize, split, train, evaluate, sweep, rank,
simulate, report. Each command reads the artifacts of earlier stages
from the output directory, writes its own artifacts plus a manifest
(config hash, seed, input/output digests), and is idempotent: rerunning
with the same config and seed rewrites identical bytes.

Exit codes: 0 success, 2 config error, 3 missing upstream artifact,
4 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as dt
import hashlib
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .datagen import PortfolioConfig, generate_portfolio, read_portfolio_csv, write_portfolio_csv
from .dates import month_key, parse_month
from .domain import GRACE_DAYS_DEFAULT, KNOWN_COUNTRIES, Snapshot
from .eval import accuracy, build_eval_report, region_robustness, window_sweep
from .features import (
    NUMERIC_COLUMNS,
    WindowSize,
    design_matrix,
    featurize_portfolio,
    fit_imputation,
    impute,
    label_vector,
    read_features_csv,
    write_features_csv,
)
from .models import MODEL_KINDS, fit_model, grid_search, load_model, save_model
from .ranking import (
    invoice_risk,
    kendall_tau,
    rank_customers_by_risk,
    rank_customers_greedy,
    top_k_overlap,
)
from .simulate import SimConfig, build_cohorts, run_simulation
from .splits import SplitSpec, time_series_folds, time_split

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MISSING_INPUT = 3
EXIT_RUNTIME = 4

COMMANDS = (
    "generate",
    "featurize",
    "split",
    "train",
    "evaluate",
    "sweep",
    "rank",
    "simulate",
    "report",
)


class ConfigError(ValueError):
    """Configuration file is malformed; message names the field."""


class MissingInputError(FileNotFoundError):
    """An upstream artifact required by the command does not exist."""


# ---------------------------------------------------------------------------
# configuration

_TOP_LEVEL_FIELDS = {
    "seed",
    "out_dir",
    "grace_days",
    "window_months",
    "portfolio",
    "split",
    "cv_folds",
    "model_kinds",
    "model_params",
    "grid_search_kinds",
    "grids",
    "evaluate",
    "sweep",
    "ranking",
    "simulation",
}


@dataclasses.dataclass
class PipelineConfig:
    raw: dict
    seed: int
    out_dir: Path
    grace_days: int
    window_months: int
    portfolio: PortfolioConfig
    split_spec: SplitSpec
    cv_folds: int
    model_kinds: list[str]
    model_params: dict[str, dict]
    grid_search_kinds: list[str]
    grids: dict[str, dict]
    region_model: str
    sweep_kinds: list[str]
    sweep_w: list[int]
    ranking_as_of: Optional[dt.date]
    ranking_model: str
    ranking_top_k: int
    sim_config: SimConfig
    sim_model: str
    sim_months: Optional[int]


def _parse_split(raw: dict) -> SplitSpec:
    unknown = set(raw) - {"cutoff_date", "train_fraction"}
    if unknown:
        raise ConfigError(f"split: unknown fields {sorted(unknown)}")
    try:
        return SplitSpec(
            cutoff_date=dt.date.fromisoformat(raw["cutoff_date"]) if "cutoff_date" in raw else None,
            train_fraction=float(raw["train_fraction"]) if "train_fraction" in raw else None,
        )
    except ValueError as exc:
        raise ConfigError(f"split: {exc}") from exc


def load_config(path, seed_override: Optional[int] = None, out_override: Optional[str] = None) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise MissingInputError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _TOP_LEVEL_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "seed" not in raw and seed_override is None:
        raise ConfigError("config field 'seed' is mandatory")

    seed = int(seed_override if seed_override is not None else raw["seed"])
    out_dir = Path(out_override if out_override is not None else raw.get("out_dir", "arcollect-out"))
    grace = int(raw.get("grace_days", GRACE_DAYS_DEFAULT))
    window = int(raw.get("window_months", 4))

    try:
        pf_raw = dict(raw.get("portfolio", {}))
        pf_raw.setdefault("seed", seed)
        portfolio = PortfolioConfig.from_dict(pf_raw)
        split_spec = _parse_split(raw.get("split", {"cutoff_date": "2019-07-01"}))
        window_ok = WindowSize(window)  # noqa: F841  (range check)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    model_kinds = list(raw.get("model_kinds", ["naive_bayes", "logistic_regression",
                                               "random_forest", "gbdt", "ensemble"]))
    for kind in model_kinds:
        if kind not in MODEL_KINDS:
            raise ConfigError(f"model_kinds: unknown kind {kind!r}; valid: {sorted(MODEL_KINDS)}")
    model_params = {k: dict(v) for k, v in raw.get("model_params", {}).items()}
    for kind in model_params:
        if kind not in MODEL_KINDS:
            raise ConfigError(f"model_params: unknown kind {kind!r}")
    gs_kinds = list(raw.get("grid_search_kinds", []))
    for kind in gs_kinds:
        if kind not in model_kinds:
            raise ConfigError(f"grid_search_kinds: {kind!r} is not in model_kinds")

    ev = dict(raw.get("evaluate", {}))
    if set(ev) - {"region_model"}:
        raise ConfigError(f"evaluate: unknown fields {sorted(set(ev) - {'region_model'})}")
    sweep_raw = dict(raw.get("sweep", {}))
    if set(sweep_raw) - {"kinds", "w_min", "w_max"}:
        raise ConfigError(f"sweep: unknown fields")
    w_min, w_max = int(sweep_raw.get("w_min", 3)), int(sweep_raw.get("w_max", 12))
    if not 3 <= w_min <= w_max <= 12:
        raise ConfigError(f"sweep: need 3 <= w_min <= w_max <= 12, got [{w_min}, {w_max}]")

    rank_raw = dict(raw.get("ranking", {}))
    if set(rank_raw) - {"as_of", "model", "top_k"}:
        raise ConfigError("ranking: unknown fields")
    sim_raw = dict(raw.get("simulation", {}))
    sim_model = sim_raw.pop("model", "ensemble")
    sim_months = sim_raw.pop("first_months", 3)
    try:
        sim_raw.setdefault("seed", seed)
        sim_config = SimConfig.from_dict(sim_raw)
    except ValueError as exc:
        raise ConfigError(f"simulation: {exc}") from exc

    return PipelineConfig(
        raw=raw,
        seed=seed,
        out_dir=out_dir,
        grace_days=grace,
        window_months=window,
        portfolio=portfolio,
        split_spec=split_spec,
        cv_folds=int(raw.get("cv_folds", 3)),
        model_kinds=model_kinds,
        model_params=model_params,
        grid_search_kinds=gs_kinds,
        grids={k: dict(v) for k, v in raw.get("grids", {}).items()},
        region_model=str(ev.get("region_model", "gbdt")),
        sweep_kinds=list(sweep_raw.get("kinds", ["gbdt", "random_forest"])),
        sweep_w=list(range(w_min, w_max + 1)),
        ranking_as_of=dt.date.fromisoformat(rank_raw["as_of"]) if "as_of" in rank_raw else None,
        ranking_model=str(rank_raw.get("model", "ensemble")),
        ranking_top_k=int(rank_raw.get("top_k", 20)),
        sim_config=sim_config,
        sim_model=str(sim_model),
        sim_months=int(sim_months) if sim_months is not None else None,
    )


# ---------------------------------------------------------------------------
# artifacts and manifests

def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_json(obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _config_hash(cfg: PipelineConfig) -> str:
    canonical = json.dumps(cfg.raw, sort_keys=True, separators=(",", ":")) + f"|seed={cfg.seed}"
    return hashlib.sha256(canonical.encode()).hexdigest()


def _require(cfg: PipelineConfig, *names: str) -> dict[str, Path]:
    paths = {}
    for name in names:
        path = cfg.out_dir / name
        if not path.exists():
            raise MissingInputError(
                f"missing upstream artifact {path}; run the producing command first"
            )
        paths[name] = path
    return paths


def _write_manifest(cfg: PipelineConfig, command: str, inputs: dict[str, Path],
                    outputs: dict[str, Path]) -> None:
    manifest = {
        "command": command,
        "config_sha256": _config_hash(cfg),
        "seed": cfg.seed,
        "inputs": {name: _sha256(path) for name, path in sorted(inputs.items())},
        "outputs": {name: _sha256(path) for name, path in sorted(outputs.items())},
    }
    _write_json(manifest, cfg.out_dir / f"{command}_manifest.json")


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# shared loading helpers

def _load_portfolio(cfg: PipelineConfig):
    paths = _require(cfg, "portfolio.csv", "snapshot.json")
    invoices = read_portfolio_csv(paths["portfolio.csv"])
    snap_raw = json.loads(paths["snapshot.json"].read_text())
    return invoices, Snapshot(as_of_date=dt.date.fromisoformat(snap_raw["as_of_date"]))


def _load_split_rows(cfg: PipelineConfig):
    paths = _require(cfg, "features.csv", "split.json")
    rows = read_features_csv(paths["features.csv"])
    split = json.loads(paths["split.json"].read_text())
    by_id = {r.invoice_id: r for r in rows}
    train = [by_id[i] for i in split["train_ids"]]
    test = [by_id[i] for i in split["test_ids"]]
    return rows, train, test


def _load_preprocessing(cfg: PipelineConfig):
    paths = _require(cfg, "preprocessing.json")
    raw = json.loads(paths["preprocessing.json"].read_text())
    return raw["imputation_means"], raw["countries"]


def _impute_rows(rows, means):
    from .features import ImputationStats

    stats = ImputationStats(means=dict(means))
    return [impute(r, stats) for r in rows]


# ---------------------------------------------------------------------------
# commands

def cmd_generate(cfg: PipelineConfig) -> None:
    invoices, snapshot = generate_portfolio(cfg.portfolio, cfg.grace_days)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out_csv = cfg.out_dir / "portfolio.csv"
    write_portfolio_csv(invoices, out_csv)
    snap_path = cfg.out_dir / "snapshot.json"
    _write_json(
        {
            "as_of_date": snapshot.as_of_date.isoformat(),
            "portfolio_config": cfg.portfolio.to_dict(),
            "n_invoices": len(invoices),
        },
        snap_path,
    )
    _write_manifest(cfg, "generate", {}, {"portfolio.csv": out_csv, "snapshot.json": snap_path})


def cmd_featurize(cfg: PipelineConfig) -> None:
    invoices, snapshot = _load_portfolio(cfg)
    rows = featurize_portfolio(invoices, snapshot, WindowSize(cfg.window_months), cfg.grace_days)
    out_csv = cfg.out_dir / "features.csv"
    write_features_csv(rows, out_csv)
    manifest_path = cfg.out_dir / "features_manifest.json"
    _write_json(
        {
            "window_months": cfg.window_months,
            "grace_days": cfg.grace_days,
            "numeric_columns": list(NUMERIC_COLUMNS),
            "countries": list(KNOWN_COUNTRIES),
            "n_rows": len(rows),
            "n_labeled": sum(1 for r in rows if r.label is not None),
        },
        manifest_path,
    )
    _write_manifest(
        cfg,
        "featurize",
        _require(cfg, "portfolio.csv", "snapshot.json"),
        {"features.csv": out_csv, "features_manifest.json": manifest_path},
    )


def cmd_split(cfg: PipelineConfig) -> None:
    paths = _require(cfg, "features.csv")
    rows = read_features_csv(paths["features.csv"])
    labeled = [r for r in rows if r.label is not None]
    train, test = time_split(labeled, cfg.split_spec)
    out = cfg.out_dir / "split.json"
    _write_json(
        {
            "spec": {
                "cutoff_date": cfg.split_spec.cutoff_date.isoformat()
                if cfg.split_spec.cutoff_date
                else None,
                "train_fraction": cfg.split_spec.train_fraction,
            },
            "train_ids": [r.invoice_id for r in train],
            "test_ids": [r.invoice_id for r in test],
        },
        out,
    )
    _write_manifest(cfg, "split", paths, {"split.json": out})


def cmd_train(cfg: PipelineConfig) -> None:
    _, train, _ = _load_split_rows(cfg)
    stats = fit_imputation(train)
    train_imp = [impute(r, stats) for r in train]
    X, columns = design_matrix(train_imp, KNOWN_COUNTRIES)
    y = label_vector(train_imp)

    pre_path = cfg.out_dir / "preprocessing.json"
    _write_json(
        {"imputation_means": stats.means, "columns": columns, "countries": list(KNOWN_COUNTRIES)},
        pre_path,
    )

    cv_rows = []
    outputs = {"preprocessing.json": pre_path}
    models_dir = cfg.out_dir / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    for kind in cfg.model_kinds:
        params = dict(cfg.model_params.get(kind, {}))
        if kind in cfg.grid_search_kinds:
            folds = time_series_folds(train_imp, cfg.cv_folds)
            result = grid_search(
                kind, X, y, folds, grid=cfg.grids.get(kind), seed=cfg.seed, feature_names=columns
            )
            params.update(result.best_params)
            for rec in result.table:
                cv_rows.append(
                    [kind, json.dumps(rec["params"], sort_keys=True), rec["fold"],
                     repr(rec["metric"])]
                )
        model = fit_model(kind, X, y, columns, params=params, seed=cfg.seed)
        path = models_dir / f"{kind}.json"
        save_model(model, path)
        outputs[f"models/{kind}.json"] = path
    cv_path = cfg.out_dir / "cv_table.csv"
    _write_csv(cv_path, ["kind", "params", "fold", "metric"], cv_rows)
    outputs["cv_table.csv"] = cv_path
    _write_manifest(cfg, "train", _require(cfg, "features.csv", "split.json"), outputs)


def _model_paths(cfg: PipelineConfig) -> dict[str, Path]:
    return {
        f"models/{kind}.json": cfg.out_dir / "models" / f"{kind}.json"
        for kind in cfg.model_kinds
    }


def cmd_evaluate(cfg: PipelineConfig) -> None:
    _, train, test = _load_split_rows(cfg)
    means, countries = _load_preprocessing(cfg)
    test_imp = _impute_rows(test, means)
    X_test, _ = design_matrix(test_imp, countries)
    y_test = label_vector(test_imp)
    months = [r.creation_month for r in test_imp]
    row_countries = [r.country for r in test_imp]

    inputs = _require(cfg, "features.csv", "split.json", "preprocessing.json")
    probs = {}
    for name, path in _model_paths(cfg).items():
        if not path.exists():
            raise MissingInputError(f"missing model artifact {path}; run train first")
        inputs[name] = path
        model = load_model(path)
        probs[model.kind] = model.predict_proba(X_test)

    report = build_eval_report(probs, y_test, months, row_countries)
    report_path = cfg.out_dir / "eval_report.json"
    _write_json(report.to_dict(), report_path)

    month_rows = [
        [kind, month, repr(value)]
        for kind in sorted(report.per_month)
        for month, value in sorted(report.per_month[kind].items())
    ]
    month_path = cfg.out_dir / "accuracy_per_month.csv"
    _write_csv(month_path, ["kind", "month", "accuracy"], month_rows)

    roc_rows = [
        [kind, repr(fpr), repr(tpr)]
        for kind in sorted(report.roc)
        for fpr, tpr in report.roc[kind].points
    ]
    roc_path = cfg.out_dir / "roc_curves.csv"
    _write_csv(roc_path, ["kind", "fpr", "tpr"], roc_rows)

    table = region_robustness(
        train,
        test,
        model_kind=cfg.region_model,
        params=cfg.model_params.get(cfg.region_model),
        countries=countries,
        seed=cfg.seed,
    )
    region_path = cfg.out_dir / "region_table.csv"
    rows = table.to_rows()
    _write_csv(region_path, rows[0], rows[1:])

    _write_manifest(
        cfg,
        "evaluate",
        inputs,
        {
            "eval_report.json": report_path,
            "accuracy_per_month.csv": month_path,
            "roc_curves.csv": roc_path,
            "region_table.csv": region_path,
        },
    )


def cmd_sweep(cfg: PipelineConfig) -> None:
    invoices, snapshot = _load_portfolio(cfg)
    result = window_sweep(
        invoices,
        snapshot,
        cfg.sweep_kinds,
        cfg.split_spec,
        w_values=cfg.sweep_w,
        params_by_kind=cfg.model_params,
        grace_days=cfg.grace_days,
        seed=cfg.seed,
    )
    json_path = cfg.out_dir / "sweep.json"
    _write_json(result.to_dict(), json_path)
    csv_path = cfg.out_dir / "sweep.csv"
    rows = [
        [kind, w, repr(acc)]
        for kind in sorted(result.accuracy)
        for w, acc in zip(result.w_values, result.accuracy[kind])
    ]
    _write_csv(csv_path, ["kind", "window_months", "accuracy"], rows)
    _write_manifest(
        cfg,
        "sweep",
        _require(cfg, "portfolio.csv", "snapshot.json"),
        {"sweep.json": json_path, "sweep.csv": csv_path},
    )


def cmd_rank(cfg: PipelineConfig) -> None:
    invoices, snapshot = _load_portfolio(cfg)
    paths = _require(cfg, "features.csv", "preprocessing.json")
    rows = read_features_csv(paths["features.csv"])
    means, countries = _load_preprocessing(cfg)
    model_path = cfg.out_dir / "models" / f"{cfg.ranking_model}.json"
    if not model_path.exists():
        raise MissingInputError(f"missing model artifact {model_path}; run train first")
    paths[f"models/{cfg.ranking_model}.json"] = model_path
    model = load_model(model_path)

    as_of = cfg.ranking_as_of or snapshot.as_of_date
    open_invoices = [
        inv
        for inv in invoices
        if inv.creation_date <= as_of
        and (inv.settled_date is None or inv.settled_date >= as_of)
    ]
    if not open_invoices:
        raise ValueError(f"no open invoices as of {as_of}")
    by_id = {r.invoice_id: r for r in rows}
    open_rows = _impute_rows([by_id[inv.invoice_id] for inv in open_invoices], means)
    X, _ = design_matrix(open_rows, countries)
    probs = model.predict_proba(X)

    risks: dict[str, list] = {}
    overdue: dict[str, list[float]] = {}
    for inv, p in zip(open_invoices, probs):
        risks.setdefault(inv.customer_id, []).append(
            invoice_risk(inv.invoice_id, inv.base_amount, float(p))
        )
        overdue.setdefault(inv.customer_id, []).append(
            inv.base_amount if inv.due_date < as_of else 0.0
        )
    risk_rank = rank_customers_by_risk(risks)
    greedy_rank = rank_customers_greedy(overdue)

    risk_path = cfg.out_dir / "ranking_risk.csv"
    _write_csv(
        risk_path,
        ["rank", "customer_id", "mean_risk", "n_invoices"],
        [[r.position, r.customer_id, repr(r.mean_risk), r.n_invoices] for r in risk_rank],
    )
    greedy_path = cfg.out_dir / "ranking_greedy.csv"
    _write_csv(
        greedy_path,
        ["rank", "customer_id", "total_overdue", "n_invoices"],
        [[g.position, g.customer_id, repr(g.total_value), g.n_invoices] for g in greedy_rank],
    )
    tau = kendall_tau(
        [r.customer_id for r in risk_rank], [g.customer_id for g in greedy_rank]
    )
    overlap = top_k_overlap(
        [r.customer_id for r in risk_rank],
        [g.customer_id for g in greedy_rank],
        cfg.ranking_top_k,
    )
    cmp_path = cfg.out_dir / "ranking_comparison.json"
    _write_json(
        {
            "as_of": as_of.isoformat(),
            "model": cfg.ranking_model,
            "n_customers": len(risk_rank),
            "n_open_invoices": len(open_invoices),
            "kendall_tau": tau,
            "top_k": cfg.ranking_top_k,
            "top_k_overlap": overlap,
        },
        cmp_path,
    )
    paths.update(_require(cfg, "portfolio.csv", "snapshot.json"))
    _write_manifest(
        cfg,
        "rank",
        paths,
        {
            "ranking_risk.csv": risk_path,
            "ranking_greedy.csv": greedy_path,
            "ranking_comparison.json": cmp_path,
        },
    )


def cmd_simulate(cfg: PipelineConfig) -> None:
    _, _, test = _load_split_rows(cfg)
    means, countries = _load_preprocessing(cfg)
    model_path = cfg.out_dir / "models" / f"{cfg.sim_model}.json"
    if not model_path.exists():
        raise MissingInputError(f"missing model artifact {model_path}; run train first")
    model = load_model(model_path)
    test_imp = _impute_rows(test, means)
    X, _ = design_matrix(test_imp, countries)
    cohorts = build_cohorts(test_imp, model.predict_proba(X))

    sim_cfg = cfg.sim_config
    if sim_cfg.months is None:
        months = tuple(sorted(cohorts))
        if cfg.sim_months is not None:
            months = months[: cfg.sim_months]
        sim_cfg = dataclasses.replace(sim_cfg, months=months)
    result = run_simulation(cohorts, sim_cfg)

    csv_path = cfg.out_dir / "simulation.csv"
    result.write_tidy_csv(csv_path)
    json_path = cfg.out_dir / "simulation.json"
    _write_json(result.summary(), json_path)
    inputs = _require(cfg, "features.csv", "split.json", "preprocessing.json")
    inputs[f"models/{cfg.sim_model}.json"] = model_path
    _write_manifest(
        cfg, "simulate", inputs, {"simulation.csv": csv_path, "simulation.json": json_path}
    )


def cmd_report(cfg: PipelineConfig) -> None:
    from . import report as rpt  # matplotlib import deferred to this command

    inputs = _require(
        cfg, "eval_report.json", "sweep.json", "simulation.csv", "region_table.csv"
    )
    report_dir = cfg.out_dir / "report"
    report_dir.mkdir(parents=True, exist_ok=True)

    eval_raw = json.loads(inputs["eval_report.json"].read_text())
    sweep_raw = json.loads(inputs["sweep.json"].read_text())

    sweep_svg = report_dir / "accuracy_vs_window.svg"
    rpt.plot_window_sweep(sweep_raw["w_values"], sweep_raw["accuracy"], sweep_svg)

    month_svg = report_dir / "accuracy_per_month.svg"
    rpt.plot_accuracy_per_month(eval_raw["per_month"], eval_raw["baseline"], month_svg)

    roc_svg = report_dir / "roc_curves.svg"
    rpt.plot_roc_curves(eval_raw["roc"], roc_svg)

    region_dst = report_dir / "region_table.csv"
    region_dst.write_bytes(inputs["region_table.csv"].read_bytes())

    months, n_calls, p_values = [], [], []
    diffs: dict[tuple[str, int, int], list[float]] = {}
    with open(inputs["simulation.csv"], newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            month, n, p = rec["month"], int(rec["n"]), float(rec["p"])
            if month not in months:
                months.append(month)
            if n not in n_calls:
                n_calls.append(n)
            if p not in p_values:
                p_values.append(p)
            key = (month, n, p_values.index(p))
            diffs.setdefault(key, []).append(float(rec["savings_diff"]))
    sim_svg = report_dir / "savings_boxplots.svg"
    rpt.plot_savings_boxplots(months, n_calls, p_values, diffs, sim_svg)

    _write_manifest(
        cfg,
        "report",
        inputs,
        {
            "report/accuracy_vs_window.svg": sweep_svg,
            "report/accuracy_per_month.svg": month_svg,
            "report/roc_curves.svg": roc_svg,
            "report/region_table.csv": region_dst,
            "report/savings_boxplots.svg": sim_svg,
        },
    )


_COMMANDS = {
    "generate": cmd_generate,
    "featurize": cmd_featurize,
    "split": cmd_split,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "rank": cmd_rank,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="arcollect",
        description="Invoice late-payment prediction and collections-policy simulation.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="pipeline config JSON")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, seed_override=args.seed, out_override=args.out)
        _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingInputError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except Exception as exc:  # noqa: BLE001  (CLI boundary)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
