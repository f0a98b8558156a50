"""Command-line front end: configs, seeded RNG, audit reports.

Every randomized step draws from numpy's PCG64 seeded by a SeedSequence built
from the config seed plus a fixed per-use key, so a config reproduces its
report byte for byte regardless of how many workers run the batch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import constructions, dfs_path, distgraph, expander, haxell, incidence
from .gf import FieldError, FqSpace, field_from_q, fast_value_distribution, select_mu
from .trees import ColoredTree

COMMANDS = ("spectrum", "mixing", "peel", "embed-path", "embed-tree", "construct",
            "incidence", "probe-conjecture", "audit")
VERDICTS = ("pass", "vacuous", "fail")
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
SEED_MAX = 2**64 - 1


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    q: int | None = None
    d: int | None = None
    radii: str = "all"
    set_source: str = "full"
    seed: int = 0
    C: float | None = None
    Delta: int = 2
    m: int = 1
    s_cap: int | None = None
    length: int | None = None
    colors: str = "cyclic"
    strategy: str = "exact-good"
    kind: str | None = None
    slab_k: int | None = None
    r: int | None = None
    samples: int = 100
    tree: str | None = None
    host: str = "distance"
    points: str | None = None
    spheres: str | None = None
    reports: tuple[str, ...] = ()
    certify: bool = False
    validate: bool = False
    workers: int = 1
    output: str | None = None
    format: str = "json"
    timing: bool = False
    p: int | None = field(default=None, init=False)
    ext_degree: int | None = field(default=None, init=False)

    def __post_init__(self):
        self.validate_config()

    def validate_config(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if not 0 <= int(self.seed) <= SEED_MAX:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.command == "audit":
            if not self.reports:
                raise ConfigError("audit needs at least one report file")
            return
        if self.command == "embed-tree" and self.host != "distance":
            return
        if self.q is None or self.d is None:
            raise ConfigError(f"{self.command} needs --q and --d")
        try:
            spec = field_from_q(int(self.q))
        except FieldError as exc:
            raise ConfigError(str(exc)) from None
        if spec.p == 2:
            raise ConfigError("q must be odd")
        self.p, self.ext_degree = spec.p, spec.ext_degree
        if self.d < 1:
            raise ConfigError("d must be positive")
        if self.q ** self.d > 2**22:
            raise ConfigError(f"q^d = {self.q ** self.d} is beyond desk scale")
        if self.command == "embed-path" and (self.length is None or self.length < 1):
            raise ConfigError("embed-path needs --len >= 1")
        if self.command == "construct" and self.kind not in constructions.KINDS:
            raise ConfigError(f"construct needs --kind in {constructions.KINDS}")
        if self.command == "embed-tree" and self.strategy not in haxell.STRATEGIES:
            raise ConfigError(f"strategy must be one of {haxell.STRATEGIES}")
        self.radius_list()

    def radius_list(self) -> list[int]:
        if self.radii == "all":
            return list(range(1, self.q))
        try:
            out = [int(x) for x in str(self.radii).split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad distance list {self.radii!r}") from None
        if not out or any(not 0 < r < self.q for r in out) or len(set(out)) != len(out):
            raise ConfigError(f"distances must be distinct nonzero field encodings, got {self.radii!r}")
        return out

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["reports"] = list(self.reports)
        for k in ("output", "workers", "timing", "format"):
            out.pop(k)
        return out

    def rng(self, *keys: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(self.seed), *keys])))


# per-use RNG keys
KEY_SET, KEY_MIX, KEY_PATH, KEY_INC, KEY_HOST = 1, 2, 3, 4, 5


@dataclass
class AuditEntry:
    theorem: str
    verdict: str
    params: dict = field(default_factory=dict)
    bound: Any = None
    observed: Any = None
    note: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")


@dataclass
class RunReport:
    config: dict
    audits: list[AuditEntry] = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    timing: float | None = None

    def add(self, theorem: str, ok: bool | None, vacuous: bool = False, **kw) -> AuditEntry:
        verdict = "vacuous" if vacuous else ("pass" if ok else "fail")
        entry = AuditEntry(theorem, verdict, **kw)
        self.audits.append(entry)
        return entry

    @property
    def failed(self) -> bool:
        return any(a.verdict == "fail" for a in self.audits)

    def to_dict(self) -> dict:
        out = {"config": self.config, "audits": [asdict(a) for a in self.audits], "payload": self.payload}
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def dumps(self) -> str:
        return json.dumps(_plain(self.to_dict()), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if "summary" in self.payload:
            w.writerow(["theorem", "pass", "vacuous", "fail", "notes"])
            for row in self.payload["summary"]:
                w.writerow([row["theorem"], row["pass"], row["vacuous"], row["fail"], "; ".join(row["notes"])])
            return buf.getvalue()
        w.writerow(["theorem", "verdict", "bound", "observed", "note"])
        for a in self.audits:
            w.writerow([a.theorem, a.verdict, json.dumps(_plain(a.bound)), json.dumps(_plain(a.observed)), a.note])
        return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _plain(float(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# shared inputs
# ---------------------------------------------------------------------------

def _host(cfg: ExperimentConfig) -> distgraph.DistanceGraphFamily:
    return distgraph.DistanceGraphFamily.build(cfg.p, cfg.ext_degree, cfg.d, cfg.radius_list())


def _load_points(space: FqSpace, path: str) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    return np.array(sorted({space.decode_point(x) for x in data}), dtype=np.int64)


def resolve_set(cfg: ExperimentConfig, space: FqSpace) -> np.ndarray:
    """full | random:size[:seed] | path to a JSON point list."""
    src = cfg.set_source
    if src == "full":
        return np.arange(space.n, dtype=np.int64)
    if src.startswith("random:"):
        parts = src.split(":")
        try:
            size = int(parts[1])
            seed = int(parts[2]) if len(parts) > 2 else cfg.seed
        except (IndexError, ValueError):
            raise ConfigError(f"bad set source {src!r}; expected random:size[:seed]") from None
        if not 0 <= size <= space.n:
            raise ConfigError(f"random set size {size} outside [0, {space.n}]")
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, KEY_SET])))
        return np.sort(rng.choice(space.n, size=size, replace=False)).astype(np.int64)
    if Path(src).exists():
        return _load_points(space, src)
    raise ConfigError(f"set source {src!r} is neither full, random:size:seed, nor an existing file")


def resolve_path(cfg: ExperimentConfig, t: int) -> dfs_path.ColoredPath:
    spec = cfg.colors
    if spec == "cyclic":
        return dfs_path.ColoredPath.cyclic(cfg.length, t)
    if spec == "constant":
        return dfs_path.ColoredPath.constant(cfg.length)
    if spec.startswith("random:"):
        return dfs_path.ColoredPath.random(cfg.length, t, int(spec.split(":")[1]))
    cols = tuple(int(x) for x in spec.split(","))
    if any(not 0 <= c < t for c in cols):
        raise ConfigError("color indices must lie in [0, t)")
    return dfs_path.ColoredPath(cfg.length, cols)


def _load_json_arg(value: str):
    if value.lstrip().startswith(("{", "[")):
        return json.loads(value)
    return json.loads(Path(value).read_text())


def resolve_synthetic_host(cfg: ExperimentConfig) -> expander.ExplicitColoredFamily:
    """random:n:t:p:seed | complete:n:t | JSON file {"n", "t", "edges": [[u, v, color]]}."""
    src = cfg.host
    if src.startswith("random:"):
        _, n, t, p, seed = src.split(":")
        return expander.random_dense_family(int(n), int(t), float(p), int(seed))
    if src.startswith("complete:"):
        _, n, t = src.split(":")
        return expander.complete_family(int(n), int(t))
    obj = _load_json_arg(src)
    return expander.ExplicitColoredFamily.from_edges(int(obj["n"]), int(obj["t"]), obj["edges"])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectrum(cfg: ExperimentConfig, rep: RunReport):
    host = _host(cfg)
    rows = []
    for r in host.radii:
        host.spectrum(r, workers=cfg.workers)
        row = distgraph.verify_ndl(host, r)
        if host.n <= distgraph.DENSE_CAP:
            _, eig = host.spectrum(r)
            row["dense_agree"] = distgraph.multisets_agree(eig, distgraph.spectrum_dense(host, r))
        rows.append(row)
        rep.add("distance-graph-spectrum", row["pass"] and row.get("dense_agree", True),
                params={"q": cfg.q, "d": cfg.d, "r": r}, bound=row["bound"], observed=row["lambda"])
    rep.payload["certificates"] = rows


def cmd_mixing(cfg: ExperimentConfig, rep: RunReport):
    host = _host(cfg)
    fam = expander.DistanceColoredFamily(host)
    rows = []
    for c, r in enumerate(host.radii):
        res = expander.mixing_sweep(fam, c, cfg.rng(KEY_MIX, r), cfg.samples)
        res["r"] = r
        rows.append(res)
        rep.add("expander-mixing", res["failures"] == 0, params={"q": cfg.q, "d": cfg.d, "r": r},
                bound=0, observed=res["failures"], note=f"min slack {res['min_slack']:.6g}")
    rep.payload["sweeps"] = rows


def cmd_peel(cfg: ExperimentConfig, rep: RunReport):
    host = _host(cfg)
    fam = expander.DistanceColoredFamily(host)
    S = resolve_set(cfg, host.space)
    res = expander.peel(fam, S, cfg.C)
    d = res.to_dict()
    ok = res.removed <= res.bound + 1e-9 and all(m >= res.tau for m in res.min_degrees)
    rep.add("min-degree-peeling", ok, vacuous=not res.lemma_applies,
            params={"q": cfg.q, "d": cfg.d, "t": fam.t, "C": res.C, "size_S": len(S)},
            bound=res.bound, observed=res.removed,
            note="" if res.lemma_applies else f"needs C >= 4 sqrt(t) and |S| D/(n lambda) >= C; implied C = {res.implied_C:.4g}")
    q = host.spec.q
    W, _ = expander.peel_threshold(fam, S, len(S) / (6 * q))
    star = expander.star_report(fam, W, len(S)) if len(W) else {
        "degrees_ok": True, "size_ok": len(S) - 80 * fam.t * q ** (cfg.d + 1) / max(len(S), 1) <= 0,
        "hypothesis_ok": len(S) >= 12 * math.sqrt(fam.t) * q ** ((cfg.d + 1) / 2)}
    star["size_W"] = int(len(W))
    rep.add("star-threshold", star["degrees_ok"] and star["size_ok"], vacuous=not star["hypothesis_ok"],
            params={"q": cfg.q, "d": cfg.d, "t": fam.t, "size_S": len(S)},
            bound=star.get("size_bound"), observed=len(W),
            note="" if star["hypothesis_ok"] else "|S| below 12 t^{1/2} q^{(d+1)/2}")
    rep.payload.update(peel=d, star=star)


def cmd_embed_path(cfg: ExperimentConfig, rep: RunReport):
    host = _host(cfg)
    fam = expander.DistanceColoredFamily(host)
    S = resolve_set(cfg, host.space)
    path = resolve_path(cfg, fam.t)
    res = dfs_path.embed_path(fam, S, path, validate=cfg.validate)
    n, D, lam = fam.peel_parameters()
    bound = dfs_path.path_bound(n, D, lam, fam.t, len(S))
    guaranteed = cfg.length <= bound
    rep.add("dfs-path", res.success, vacuous=not guaranteed,
            params={"q": cfg.q, "d": cfg.d, "t": fam.t, "length": cfg.length, "size_S": len(S)},
            bound=bound, observed=res.success,
            note="" if guaranteed else "requested length exceeds the guaranteed length")
    payload = res.to_dict()
    payload["embedding"] = [host.space.encode_point(v) for v in res.embedding]
    rep.payload["path"] = payload
    if cfg.certify:
        snap = dfs_path.threshold_snapshot(fam, S, path)
        s = snap["snapshot"]
        ok = snap["all_zero"] and snap["all_product_ok"] and (s is None or (s["zero_ok"] and s["sum_B_ok"]))
        rep.add("incidence-path-accounting", ok,
                params={"q": cfg.q, "d": cfg.d, "t": fam.t}, bound=snap["limit"] - 1,
                observed=None if s is None else s["sum_B"])
        rep.payload["incidence"] = snap


def cmd_embed_tree(cfg: ExperimentConfig, rep: RunReport):
    if cfg.tree is None:
        raise ConfigError("embed-tree needs --tree (JSON file or inline JSON)")
    tree = ColoredTree.from_json(_load_json_arg(cfg.tree))
    if cfg.host == "distance":
        host = _host(cfg)
        fam = expander.induce(expander.DistanceColoredFamily(host), resolve_set(cfg, host.space))
        encode = host.space.encode_point
    else:
        fam = resolve_synthetic_host(cfg)
        encode = int
    s_cap = cfg.s_cap if cfg.s_cap is not None else 2 * cfg.m
    params = haxell.GoodnessParams(cfg.Delta, cfg.m, max(tree.vertices, 1), s_cap)
    table = None
    hyp = None
    P = len(fam.universe) * fam.t
    if haxell.subset_count(P, 2 * cfg.m) <= haxell.ENUM_CAP:
        table = haxell.PairTable(fam)
        hyp = haxell.check_hypotheses(fam, cfg.Delta, cfg.m, tree.vertices, table=table)
    strategy = cfg.strategy
    if strategy == "exact-good" and haxell.subset_count(P, s_cap) > haxell.ENUM_CAP:
        raise ConfigError("goodness enumeration exceeds the cap here; use --strategy greedy")
    res = haxell.embed_tree(fam, tree, params, strategy, table=table)
    covered = hyp is not None and hyp["verdict"] == "pass" and strategy == "exact-good" and s_cap >= 2 * cfg.m
    rep.add("colorful-haxell", res.success, vacuous=not covered,
            params={"Delta": cfg.Delta, "m": cfg.m, "k": tree.vertices, "strategy": strategy},
            bound=None if hyp is None else hyp.get("k_max"), observed=res.success,
            note="" if covered else "hypotheses not verified for this host and tree size")
    if cfg.host == "distance":
        dp = haxell.distance_tree_parameters(fam, int(fam.members.sum()), cfg.Delta)
        ok_size = tree.vertices <= dp["k_distance"]
        rep.add("distance-trees", res.success, vacuous=not ok_size, params={"q": cfg.q, "d": cfg.d},
                bound=dp["k_distance"], observed=tree.vertices,
                note="" if ok_size else "guaranteed tree size is below the requested size (bound exceeds |S|)")
        rep.payload["distance_parameters"] = dp
    out = res.to_dict()
    if out["embedding"] is not None:
        out["embedding"] = [encode(v) for v in out["embedding"]]
    rep.payload.update(tree=out, hypotheses=hyp)


def cmd_construct(cfg: ExperimentConfig, rep: RunReport):
    spec = field_from_q(cfg.q)
    if cfg.kind == "avoiding":
        if cfg.slab_k is None or cfg.r is None:
            raise ConfigError("avoiding needs --k and --r")
        out = constructions.construct_avoiding(spec, cfg.d, cfg.slab_k, cfg.r)
    elif cfg.kind == "saturating":
        if cfg.slab_k is None:
            raise ConfigError("saturating needs --k")
        out = constructions.construct_saturating(spec, cfg.d, cfg.slab_k, cfg.r)
    else:
        out = constructions.construct_ikr(spec, cfg.d)
    ver = out.verify()
    rep.add(f"{cfg.kind}-construction", ver["pass"], params=out.params,
            bound={"avoiding": 0, "saturating": ver["product"], "ikr": 0}[cfg.kind], observed=ver["S_r"])
    space = out.space
    Qd = fast_value_distribution(space, space.qform(space.points, int(select_mu(cfg.d, spec))))
    Nd = fast_value_distribution(space, space.norm(space.points))
    rep.add("form-equivalence", Qd == Nd, params={"q": cfg.q, "d": cfg.d})
    rep.payload.update(verification=ver,
                       X=[space.encode_point(v) for v in out.X],
                       Y=[space.encode_point(v) for v in out.Y])


def cmd_incidence(cfg: ExperimentConfig, rep: RunReport):
    space = FqSpace(field_from_q(cfg.q), cfg.d)
    if cfg.points is not None and cfg.spheres is not None:
        X = _load_points(space, cfg.points)
        Y = incidence.SphereSet((space.decode_point(s["center"]), int(space.spec(s["radius"]).value))
                                for s in _load_json_arg(cfg.spheres))
        configs = [(X, Y)]
    else:
        rng = cfg.rng(KEY_INC)
        configs = [incidence.random_configuration(space, rng) for _ in range(cfg.samples)]
    worst = None
    fails = agree_fails = 0
    for X, Y in configs:
        a = incidence.count_by_pairs(space, X, Y)
        b = incidence.count_by_spheres(space, X, Y)
        agree_fails += a != b
        chk = incidence.bound_check_general(space, X, Y, incidences=a)
        fails += not chk["pass"]
        if worst is None or chk["slack"] < worst["slack"]:
            worst = chk
    rep.add("point-sphere-incidence", fails == 0 and agree_fails == 0,
            params={"q": cfg.q, "d": cfg.d, "configurations": len(configs)},
            bound=0, observed=fails, note=f"strategy disagreements {agree_fails}")
    rep.payload["worst"] = worst


def cmd_probe(cfg: ExperimentConfig, rep: RunReport):
    host = distgraph.DistanceGraphFamily.build(cfg.p, cfg.ext_degree, cfg.d, "all")
    fam = expander.DistanceColoredFamily(host)
    S = resolve_set(cfg, host.space)
    res = expander.probe_min_degree_conjecture(fam, S)
    rep.add("min-degree-conjecture", res["within_conjecture"], vacuous=not res["hypothesis_ok"],
            params={"q": cfg.q, "d": cfg.d, "size_S": len(S)}, bound=res["conjectured_bound"],
            observed=res["removed"], note="" if res["hypothesis_ok"] else "needs C > 50")
    rep.payload["probe"] = res


def cmd_audit(cfg: ExperimentConfig, rep: RunReport):
    reports = [json.loads(Path(p).read_text()) for p in cfg.reports]
    rep.payload["summary"] = theorem_audit(reports)


DISPATCH = {"spectrum": cmd_spectrum, "mixing": cmd_mixing, "peel": cmd_peel,
            "embed-path": cmd_embed_path, "embed-tree": cmd_embed_tree, "construct": cmd_construct,
            "incidence": cmd_incidence, "probe-conjecture": cmd_probe, "audit": cmd_audit}


def run(cfg: ExperimentConfig) -> RunReport:
    rep = RunReport(config=cfg.to_dict())
    start = time.perf_counter()
    DISPATCH[cfg.command](cfg, rep)
    if cfg.timing:
        rep.timing = round(time.perf_counter() - start, 3)
    return rep


def theorem_audit(reports: Iterable) -> list[dict]:
    """Count pass/vacuous/fail per theorem id; vacuous rows carry their notes."""
    table: dict[str, dict] = {}
    for rep in reports:
        d = rep.to_dict() if isinstance(rep, RunReport) else rep
        for a in d.get("audits", []):
            row = table.setdefault(a["theorem"], {"theorem": a["theorem"], "pass": 0, "vacuous": 0,
                                                  "fail": 0, "notes": []})
            row[a["verdict"]] += 1
            if a["verdict"] != "pass" and a.get("note") and a["note"] not in row["notes"]:
                row["notes"].append(a["note"])
    return [table[k] for k in sorted(table)]


def _run_to_text(cfg: ExperimentConfig) -> str:
    return run(cfg).dumps()


def run_batch(configs: Sequence[ExperimentConfig], workers: int = 1) -> list[str]:
    """Serialized reports in input order; worker count does not change the bytes."""
    if workers <= 1:
        return [_run_to_text(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_to_text, configs))


# ---------------------------------------------------------------------------
# argparse
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fqtrees", description="Distance-graph experiments over F_q^d.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, field_args=True):
        p.add_argument("--out", dest="output", help="write the report here (atomic)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
        if field_args:
            p.add_argument("--q", type=int, required=True)
            p.add_argument("--d", type=int, required=True)
            p.add_argument("--r", "--distances", dest="radii", default="all",
                           help="comma-separated distances or 'all'")

    p = sub.add_parser("spectrum", help="(n, D, lambda) certificates per distance")
    common(p)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("mixing", help="random mixing-lemma sweep")
    common(p)
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("peel", help="min-degree peeling and star threshold")
    common(p)
    p.add_argument("--set", dest="set_source", default="full")
    p.add_argument("--C", type=float)

    p = sub.add_parser("embed-path", help="one-pass DFS path embedding")
    common(p)
    p.add_argument("--set", dest="set_source", default="full")
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--colors", default="cyclic", help="cyclic | constant | random:seed | c0,c1,...")
    p.add_argument("--certify", action="store_true", help="audit the incidence accounting at every step")
    p.add_argument("--validate", action="store_true", help="check DFS invariants at every step")

    p = sub.add_parser("embed-tree", help="colored tree embedding")
    common(p, field_args=False)
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", "--distances", dest="radii", default="all")
    p.add_argument("--set", dest="set_source", default="full")
    p.add_argument("--tree", required=True, help="JSON file or inline JSON")
    p.add_argument("--host", default="distance",
                   help="distance | random:n:t:p:seed | complete:n:t | JSON family file")
    p.add_argument("--strategy", choices=haxell.STRATEGIES, default="exact-good")
    p.add_argument("--Delta", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--s-cap", dest="s_cap", type=int)

    p = sub.add_parser("construct", help="extremal constructions with exact verification")
    common(p, field_args=False)
    p.add_argument("--kind", choices=constructions.KINDS, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", dest="slab_k", type=int)
    p.add_argument("--r", type=int)

    p = sub.add_parser("incidence", help="point-sphere incidence bound")
    common(p, field_args=False)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--points")
    p.add_argument("--spheres")
    p.add_argument("--samples", type=int, default=500)

    p = sub.add_parser("probe-conjecture", help="observational min-degree probe")
    common(p)
    p.add_argument("--set", dest="set_source", default="full")

    p = sub.add_parser("audit", help="aggregate verdicts across report files")
    common(p, field_args=False)
    p.add_argument("reports", nargs="+")
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig) if f.init}
    kw = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    if "reports" in kw:
        kw["reports"] = tuple(kw["reports"])
    return ExperimentConfig(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        rep = run(cfg)
    except (ConfigError, FieldError, constructions.ConstructionError, haxell.EmbeddingError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = rep.to_csv() if cfg.format == "csv" else rep.dumps()
    if cfg.output:
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    if cfg.command == "audit":
        return EXIT_FAIL if any(row["fail"] for row in rep.payload["summary"]) else EXIT_OK
    return EXIT_FAIL if rep.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
