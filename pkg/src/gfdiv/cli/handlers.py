from __future__ import annotations

import logging
import math

from gfdiv.cli.render import Outcome, Record
from gfdiv.cli.specs import (
    RunConfig,
    parse_channel,
    parse_dist,
    parse_floats,
    parse_generator,
    parse_ints,
    parse_pair,
    parse_shape,
    parse_transform,
    require,
)
from gfdiv.config import get_settings
from gfdiv.core.models import BoundResult, ScanReport, Verdict
from gfdiv.core.probcore import Dist
from gfdiv.generators.descriptors import curvature_shape
from gfdiv.services.bounds import (
    Direction,
    blocklength_table,
    fano_lower,
    ht_bound_check,
    kl_comparison,
    simulate_threshold_test,
)
from gfdiv.services.divergence import f_div, gf_div, support_extension_used
from gfdiv.services.exponent import exponent_curve, power_family
from gfdiv.services.information import igf_info, max_igf_over_input
from gfdiv.services.membership import (
    check_inv_gprime_concave,
    check_T,
    check_Tminus,
    check_Tplus,
    locate_stationary_roots,
    membership_matrix,
)
from gfdiv.services.oracle import classical_sp_oracle
from gfdiv.services.subadditivity import binary_gap_scan, equivalence_curve

logger = logging.getLogger(__name__)

NATS_PER_BIT = math.log(2.0)


def _scan_record(report: ScanReport, **extra: object) -> Record:
    return {**extra, **report.model_dump()}


def cmd_div(config: RunConfig) -> Outcome:
    pair = parse_pair(config.g, config.f)
    p = parse_dist(require(config.p, "--p"))
    q = parse_dist(require(config.q, "--q"))
    record: Record = {
        "pair": pair.label,
        "dm": pair.dm,
        "f_div": f_div(p, q, pair.f),
        "value": gf_div(p, q, pair),
        "support_extension": support_extension_used(p, q),
    }
    return Outcome(records=[record])


def cmd_info(config: RunConfig) -> Outcome:
    pair = parse_pair(config.g, config.f)
    channel = parse_channel(require(config.channel, "--channel"))
    opts = config.solver_opts()
    p = parse_dist(config.input) if config.input else Dist.uniform(channel.nx)
    result = igf_info(p, channel, pair, opts)
    record: Record = {"pair": pair.label, "input": list(p.probs), **result.model_dump()}
    if config.maximize:
        best_value, best_input = max_igf_over_input(channel, pair, opts)
        record.update(max_value=best_value, max_input=list(best_input.probs))
    return Outcome(records=[record])


def cmd_subadd(config: RunConfig) -> Outcome:
    pair = parse_pair(config.g, config.f)
    scan = binary_gap_scan(
        pair,
        grid_res=config.grid_res,
        random_samples=config.random_samples,
        seed=config.seed,
        threads=config.threads,
    )
    records = [_scan_record(scan, check="binary_gap_scan")]
    reduction = check_inv_gprime_concave(pair.g)
    records.append(_scan_record(reduction, check="binary_reduction"))
    if pair.g.name == "x":
        records.append(_scan_record(check_T(pair.f, seed=config.seed), check="class_T"))

    if config.eps_grid:
        laws = [
            parse_dist(require(value, flag))
            for value, flag in (
                (config.qy, "--qy"),
                (config.ry, "--ry"),
                (config.qz, "--qz"),
                (config.rz, "--rz"),
            )
        ]
        eps_grid = parse_floats(config.eps_grid)
        values = equivalence_curve(pair, *laws, eps_grid, config.solver_opts())
        records.extend(
            {"check": "equivalence_curve", "eps": eps, "upsilon": value}
            for eps, value in zip(eps_grid, values)
        )
    return Outcome(records=records, failed=scan.verdict is Verdict.FAIL)


def cmd_check(config: RunConfig) -> Outcome:
    if config.target == "roots":
        f = parse_generator(config.f)
        qz = parse_dist(require(config.qz, "--qz"))
        rz = parse_dist(require(config.rz, "--rz"))
        roots = locate_stationary_roots(f, qz, rz, config.lam, config.a, config.b)
        record: Record = {
            "check": "stationary_roots",
            "generator": f.name,
            "count": len(roots),
            "roots": roots,
        }
        return Outcome(records=[record])

    if config.target == "inv_gprime":
        report = check_inv_gprime_concave(parse_transform(config.g))
    elif config.target == "T":
        report = check_T(parse_generator(config.f), seed=config.seed)
    else:
        if config.shape:
            shape = parse_shape(config.shape)
        else:
            shape = curvature_shape(parse_generator(config.f))
        checker = check_Tplus if config.target == "Tplus" else check_Tminus
        report = checker(shape)
    return Outcome(
        records=[_scan_record(report, check=config.target)],
        failed=report.verdict is Verdict.FAIL,
    )


def _bound_record(kind: str, result: BoundResult) -> Record:
    return {"kind": kind, "value": result.value, **result.inputs_echo, **result.side_conditions}


def cmd_bounds(config: RunConfig) -> Outcome:
    kind = config.kind
    if kind == "klcmp":
        f = parse_generator(config.f)
        p = parse_dist(require(config.p, "--p"))
        q = parse_dist(require(config.q, "--q"))
        result = kl_comparison(f, config.s, config.c, p, q, Direction(config.direction))
        return Outcome(
            records=[_bound_record(kind, result)],
            failed=not result.side_conditions["bound_holds"],
        )

    pair = parse_pair(config.g, config.f)
    if kind == "ht":
        p = parse_dist(require(config.p, "--p"))
        q = parse_dist(require(config.q, "--q"))
        alpha, beta = config.alpha, config.beta
        if alpha is None or beta is None:
            alpha, beta = simulate_threshold_test(
                p, q, config.n, config.threshold, config.trials, config.seed
            )
        result = ht_bound_check(pair, p, q, config.n, alpha, beta)
        return Outcome(
            records=[_bound_record(kind, result)],
            failed=not result.side_conditions["consistent"],
        )

    ms = parse_ints(config.ms)
    epsilons = parse_floats(config.eps)
    if kind == "fano":
        records = [_bound_record(kind, fano_lower(pair, M, eps)) for M in ms for eps in epsilons]
        return Outcome(records=records)

    channel = parse_channel(require(config.channel, "--channel"))
    table = blocklength_table(pair, channel, ms, epsilons, config.solver_opts())
    return Outcome(records=[_bound_record(kind, result) for result in table])


def cmd_exponent(config: RunConfig) -> Outcome:
    channel = parse_channel(require(config.channel, "--channel"))
    rates = parse_floats(config.rates) if config.rates else list(get_settings().default_rates)
    scale = NATS_PER_BIT if config.bits else 1.0
    nats = [rate * scale for rate in rates]
    curve = exponent_curve(channel, nats, power_family(), config.solver_opts())

    records: list[Record] = []
    for rate, point in zip(rates, curve.per_point):
        record: Record = {
            "rate": rate,
            "exponent": point.value / scale,
            "s": point.s,
            "lower": point.lower / scale,
            "upper": point.upper / scale,
            "converged": point.converged,
            "input": list(point.input_dist or ()),
            "output": list(point.output_dist or ()),
        }
        if config.oracle:
            record["oracle"] = classical_sp_oracle(channel, rate * scale) / scale
        records.append(record)
    logger.info("Exponent curve rendered", extra={"points": len(records), "bits": config.bits})
    return Outcome(records=records)


def cmd_tables(config: RunConfig) -> Outcome:
    which = ("1", "2") if config.which == "all" else (config.which,)
    records: list[Record] = []
    mismatch = False
    for table in which:
        for row, report in membership_matrix(table):
            holds = report.verdict is Verdict.PASS
            mismatch = mismatch or holds != row.expected
            records.append(
                {
                    "table": table,
                    "generator": row.label,
                    "verdict": "Yes" if holds else "No",
                    "expected": "Yes" if row.expected else "No",
                    "min_gap": report.min_gap,
                    "witness": list(report.witness or ()),
                }
            )
    return Outcome(records=records, failed=mismatch)
