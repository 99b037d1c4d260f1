"""Command-line front end.

Subcommands: complexity, select, varsel, markov, bn, preq, test.  Output is
JSON (default) or TSV; code lengths are in nats unless ``--bits`` is given.
Exit codes: 0 success, 1 computational failure, 2 usage or ingestion error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources

import numpy as np

from .bnscore import CategoricalDataset, Dag, LocalScoreCache, hill_climb
from .complexity import comp_asymptotic, comp_multinomial_exact, comp_multinomial_szpankowski, jeffreys_integral_multinomial
from .exceptions import InvalidInputError, MDLError
from .models import Bernoulli, GaussianLocation, MarkovChain, Multinomial
from .safetest import evidence, type1_simulate
from .selection import Candidate, markov_order_select, parse_subset, select, variable_select
from .switchdist import SwitchDistribution
from .universal import NML, BayesMarginal, Beta, Dirichlet, Normal, PluginPredictor, PointMass, jeffreys_prior

DEFAULT_SEED = 20190319
LN2 = math.log(2.0)


class IngestError(Exception):
    """Unreadable or malformed input data (exit code 2)."""


def sample_path(name="coin_flips.csv"):
    """Path of a dataset bundled with the package."""
    return str(resources.files("mdlkit") / "data" / name)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def read_table(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}") from None
    if not rows or not rows[0]:
        raise IngestError(f"{path} is empty")
    header, body = rows[0], [r for r in rows[1:] if r]
    if not body:
        raise IngestError(f"{path} has a header but no data rows")
    if any(len(r) != len(header) for r in body):
        raise IngestError(f"{path} has rows of unequal length")
    return header, body


def _is_float(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_column(path, column=None, kind="auto"):
    """Load one CSV column as categorical indices or reals.

    Returns ``(values, kind, levels)``.  Categorical columns whose entries are
    all nonnegative integers keep their values as indices; other labels are
    indexed by first appearance, recorded in ``levels``.
    """
    header, body = read_table(path)
    if column is None:
        j = 0
    elif column in header:
        j = header.index(column)
    else:
        raise IngestError(f"column {column!r} not in header {header}")
    raw = [r[j].strip() for r in body]
    if any(v == "" for v in raw):
        raise IngestError(f"column {header[j]!r} has missing values")
    numeric = [_is_float(v) for v in raw]
    if any(numeric) and not all(numeric):
        raise IngestError(f"column {header[j]!r} mixes numeric and non-numeric values")
    if kind == "auto":
        kind = "real" if all(numeric) and any(not float(v).is_integer() for v in raw) else "categorical"
    if kind == "real":
        if not all(numeric):
            raise IngestError(f"column {header[j]!r} is not numeric")
        return np.array([float(v) for v in raw]), "real", None
    if all(v.isdigit() for v in raw):
        values = np.array([int(v) for v in raw], dtype=np.int64)
        levels = [str(i) for i in range(int(values.max()) + 1)]
        return values, "categorical", levels
    seen = {}
    values = np.array([seen.setdefault(v, len(seen)) for v in raw], dtype=np.int64)
    return values, "categorical", list(seen)


def read_regression(path, target):
    header, body = read_table(path)
    if target not in header:
        raise IngestError(f"target column {target!r} not in header")
    try:
        table = np.array([[float(v) for v in r] for r in body])
    except ValueError:
        raise IngestError("varsel needs an all-numeric CSV") from None
    t = header.index(target)
    features = [h for i, h in enumerate(header) if i != t]
    X = np.delete(table, t, axis=1)
    return X, table[:, t], features


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _round(x):
    if isinstance(x, float):
        return float(repr(x)) if math.isfinite(x) else x
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def dump_json(payload):
    return json.dumps(_round(payload), sort_keys=True, indent=2) + "\n"


def dump_tsv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _selection_tsv(payload):
    unit = payload["unit"]
    rows = [(c["label"], repr(c[f"codelength_{unit}"]), c["rank"]) for c in payload["candidates"]]
    return dump_tsv(rows, ["label", f"codelength_{unit}", "rank"])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_complexity(args):
    n, r = args.n, args.r
    if n < 0 or r < 1:
        raise InvalidInputError("need n >= 0 and r >= 1")
    if args.method == "exact":
        value = comp_multinomial_exact(n, r)
    elif args.method == "szpankowski":
        value = comp_multinomial_exact(n, 1) if r == 1 else comp_multinomial_szpankowski(n, r)
    else:
        value = comp_multinomial_exact(n, 1) if r == 1 else comp_asymptotic(r - 1, n, jeffreys_integral_multinomial(r), f"multinomial(r={r})")
    scale = 1 / LN2 if args.bits else 1.0
    payload = {"n": n, "r": r, "method": value.method.value, "value": value.nats * scale, "unit": "bits" if args.bits else "nats"}
    tsv = dump_tsv([(n, r, payload["method"], repr(payload["value"]))], ["n", "r", "method", payload["unit"]])
    return payload, tsv


def _categorical_family(r):
    return Bernoulli() if r == 2 else Multinomial(r)


def cmd_select(args):
    z, kind, levels = read_column(args.input, args.column, "categorical")
    r = max(len(levels), 2)
    iid = _categorical_family(r)
    candidates = [Candidate("bernoulli" if r == 2 else f"multinomial{r}", NML(iid), dim=iid.dim)]
    for k in range(1, args.max_order + 1):
        family = MarkovChain(k, r)
        candidates.append(Candidate(f"markov{k}", BayesMarginal(family, jeffreys_prior(family)), dim=family.dim))
    result = select(candidates, z, threads=args.threads)
    payload = result.to_dict(args.bits)
    payload["levels"] = levels
    return payload, _selection_tsv(payload)


def cmd_markov(args):
    z, kind, levels = read_column(args.input, args.column, "categorical")
    result = markov_order_select(z, args.max_order, max(len(levels), 2))
    payload = result.to_dict(args.bits)
    payload["levels"] = levels
    return payload, _selection_tsv(payload)


def cmd_varsel(args):
    X, y, features = read_regression(args.input, args.target)
    strategy = args.strategy
    if strategy == "auto":
        strategy = "exhaustive" if X.shape[1] <= 20 else "greedy-forward"
    result = variable_select(X, y, args.sigma2, args.c, strategy, threads=args.threads)
    payload = result.to_dict(args.bits)
    for c in payload["candidates"]:
        c["label"] = "{" + ",".join(features[j] for j in parse_subset(c["label"])) + "}"
    payload["winner"] = payload["candidates"][0]["label"]
    payload["selected"] = [features[j] for j in parse_subset(result.winner)]
    return payload, _selection_tsv(payload)


def cmd_bn(args):
    try:
        data = CategoricalDataset.from_csv(args.input)
    except InvalidInputError as exc:
        raise IngestError(str(exc)) from None
    if data.n == 0:
        raise IngestError(f"{args.input} has no data rows")
    cache = LocalScoreCache(data, args.score, args.alpha)
    result = hill_climb(data, args.score, args.alpha, args.max_parents, args.max_iters, args.seed, args.threads, cache)
    names = list(data.names)
    payload = {
        "dag": result.dag.to_dict(names),
        "local_scores": {names[i]: s for i, s in enumerate(result.local_scores)},
        "score": result.score,
        "score_name": args.score,
        "seed": args.seed,
        "iterations": result.iterations,
    }
    if data.p == 2:
        a, b = names
        payload["orientation_scores"] = {
            f"{a}->{b}": cache.total(Dag.from_edges(2, [(0, 1)])),
            f"{b}->{a}": cache.total(Dag.from_edges(2, [(1, 0)])),
        }
    rows = [(names[i], ";".join(payload["dag"][names[i]]), repr(s)) for i, s in enumerate(result.local_scores)]
    return payload, dump_tsv(rows, ["node", "parents", "local_score"])


def _preq_predictors(kind, r, sigma2, names):
    if kind == "real":
        family = GaussianLocation(sigma2)
        table = {
            "gauss-plugin": PluginPredictor(family, "ml"),
            "gauss-bayes": BayesMarginal(family, Normal(0.0, sigma2)),
        }
    else:
        family = _categorical_family(r)
        uniform = PointMass(family, 0.5 if r == 2 else np.full(r, 1.0 / r))
        jeffreys = BayesMarginal(family, jeffreys_prior(family))
        table = {
            "uniform": uniform,
            "jeffreys": jeffreys,
            "laplace": BayesMarginal(family, Beta(1, 1) if r == 2 else Dirichlet.symmetric(r, 1.0)),
            "plugin": PluginPredictor(family, "smoothed", 0.5),
            "nml": NML(family),
            "switch": SwitchDistribution(uniform, jeffreys),
        }
    names = names or (["gauss-plugin", "gauss-bayes"] if kind == "real" else ["uniform", "jeffreys", "nml", "switch"])
    unknown = [n for n in names if n not in table]
    if unknown:
        raise InvalidInputError(f"unknown predictors {unknown} for {kind} data; choose from {sorted(table)}")
    return family, {n: table[n] for n in names}


def cmd_preq(args):
    z, kind, levels = read_column(args.input, args.column, args.kind)
    names = [s.strip() for s in args.predictors.split(",")] if args.predictors else None
    r = max(len(levels), 2) if levels else 0
    family, predictors = _preq_predictors(kind, r, args.sigma2, names)
    scale = 1 / LN2 if args.bits else 1.0
    best = family.log_likelihood(family.mle(z), z)
    curves, summary = {}, {}
    for name, u in predictors.items():
        cumulative = np.cumsum(u.log_losses(z)) * scale
        curves[name] = cumulative
        summary[name] = {"final_loss": float(cumulative[-1]), "regret": float(cumulative[-1] + best * scale)}
    header = ["step"] + list(predictors)
    rows = [[i + 1] + [repr(float(curves[n][i])) for n in predictors] for i in range(z.size)]
    curve_text = dump_tsv(rows, header).replace("\t", ",")
    if args.curve:
        with open(args.curve, "w", encoding="utf-8", newline="") as fh:
            fh.write(curve_text)
    payload = {"n": int(z.size), "unit": "bits" if args.bits else "nats", "predictors": summary, "kind": kind}
    if levels:
        payload["levels"] = levels
    return payload, dump_tsv(rows, header)


def _parse_null(spec):
    try:
        name, value = spec.split(":", 1)
    except ValueError:
        raise InvalidInputError(f"null must look like 'bernoulli:0.5', got {spec!r}") from None
    if name == "bernoulli":
        return PointMass(Bernoulli(), float(value))
    if name == "multinomial":
        probs = np.array([float(v) for v in value.split(",")])
        return PointMass(Multinomial(probs.size), probs)
    raise InvalidInputError(f"unsupported null family {name!r}")


def _alternative(name, family):
    if name == "jeffreys":
        return BayesMarginal(family, jeffreys_prior(family))
    if name == "nml":
        return NML(family)
    raise InvalidInputError(f"unknown alternative {name!r}")


def cmd_test(args):
    p0 = _parse_null(args.null)
    u1 = _alternative(args.alt, p0.family)
    if args.simulate:
        res = type1_simulate(p0, u1, args.alpha, args.n, args.simulate, args.seed, threads=args.threads)
        payload = res.to_dict()
        payload["seed"] = args.seed
        return ("test-simulate", payload), dump_tsv([(k, payload[k]) for k in sorted(payload)], ["key", "value"])
    if not args.input:
        raise InvalidInputError("test needs --input or --simulate")
    z, kind, levels = read_column(args.input, args.column, "categorical")
    p0.family.check_data(z)
    report = evidence(p0, u1, z)
    payload = report.to_dict(args.alpha)
    if args.bits:
        payload["D_bits"] = report.D / LN2
    return payload, dump_tsv([(k, payload[k]) for k in sorted(payload)], ["key", "value"])


COMMANDS = {
    "complexity": cmd_complexity,
    "select": cmd_select,
    "varsel": cmd_varsel,
    "markov": cmd_markov,
    "bn": cmd_bn,
    "preq": cmd_preq,
    "test": cmd_test,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write results here instead of stdout")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--bits", action="store_true", help="report code lengths in bits")
    common.add_argument("--threads", type=int, default=None, help="evaluate independent pieces concurrently")

    parser = argparse.ArgumentParser(prog="mdlkit", description="Minimum description length model selection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complexity", parents=[common], help="multinomial parametric complexity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--method", choices=("exact", "szpankowski", "asymptotic"), default="exact")

    p = sub.add_parser("select", parents=[common], help="i.i.d. NML versus Markov Bayes codes")
    p.add_argument("--input", default=sample_path(), help="CSV with header (default: bundled coin flips)")
    p.add_argument("--column")
    p.add_argument("--max-order", type=int, default=2)

    p = sub.add_parser("varsel", parents=[common], help="MDL variable selection for linear regression")
    p.add_argument("--input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--sigma2", type=float, required=True, help="known noise variance")
    p.add_argument("--c", type=float, default=1.0, help="luckiness covariance scale")
    p.add_argument("--strategy", choices=("auto", "exhaustive", "greedy-forward"), default="auto")

    p = sub.add_parser("markov", parents=[common], help="Markov order selection")
    p.add_argument("--input", required=True)
    p.add_argument("--column")
    p.add_argument("--max-order", type=int, default=3)

    p = sub.add_parser("bn", parents=[common], help="Bayesian-network structure search")
    p.add_argument("--input", required=True)
    p.add_argument("--score", choices=("fnml", "qnml", "bdeu"), default="fnml")
    p.add_argument("--alpha", type=float, default=1.0, help="BDeu equivalent sample size")
    p.add_argument("--max-parents", type=int, default=4)
    p.add_argument("--max-iters", type=int, default=1000)

    p = sub.add_parser("preq", parents=[common], help="cumulative log-loss and regret curves")
    p.add_argument("--input", required=True)
    p.add_argument("--column")
    p.add_argument("--kind", choices=("auto", "categorical", "real"), default="auto")
    p.add_argument("--predictors", help="comma-separated predictor names")
    p.add_argument("--sigma2", type=float, default=1.0, help="noise variance for real-valued data")
    p.add_argument("--curve", help="write the per-step cumulative losses as CSV here")

    p = sub.add_parser("test", parents=[common], help="MDL test against a simple null")
    p.add_argument("--null", default="bernoulli:0.5")
    p.add_argument("--alt", choices=("jeffreys", "nml"), default="jeffreys")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--input", "--data", dest="input")
    p.add_argument("--column")
    p.add_argument("--simulate", type=int, metavar="TRIALS", help="estimate the Type-I error rate instead")
    p.add_argument("--n", type=int, default=100, help="sample size per simulated trial")
    return parser


def run(argv=None):
    """Parse ``argv`` and return ``(exit_code, output_text, schema_name)``.

    ``output_text`` is empty when results went to ``--output``.
    """
    args = build_parser().parse_args(argv)
    try:
        payload, tsv = COMMANDS[args.command](args)
    except (IngestError, InvalidInputError) as exc:
        print(f"mdlkit {args.command}: error: {exc}", file=sys.stderr)
        return 2, "", None
    except (MDLError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"mdlkit {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1, "", None
    schema = args.command
    if isinstance(payload, tuple):
        schema, payload = payload
    text = dump_json(payload) if args.format == "json" else tsv
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return 0, "", schema
    return 0, text, schema


def main(argv=None):
    code, text, _ = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
