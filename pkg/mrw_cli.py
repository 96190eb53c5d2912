import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from algebra_checks import (
    char_poly_check,
    closure_check,
    order_relations_check,
    positivity_suite,
    longest_element_structure,
    quasi_idempotent_family,
    theta_invariants,
    triangularity_check,
)
from char_ring import (
    character_table,
    character_table_matrix,
    irr_loewy_length,
    irr_radical_power_dims,
    is_lower_unitriangular_shape,
    theta,
)
from config import ENGINE_CONFIG, LOG_CONFIG, OUTPUT_CONFIG
from errors import (
    ConsistencyError,
    DomainError,
    EngineError,
    FieldError,
    ResourceError,
    SizeMismatchError,
    UsageError,
)
from exact_linear import is_prime, matrix_inverse
from mr_algebra import dimension_table, get_context, ideal_dimensions, min_poly, multiply, theta_compatible_product_check
from reports import document_meta, element_document, element_frame, render_report, render_table, dumps
from representations import (
    blocks,
    cartan_matrix,
    cartan_properties,
    center,
    center_base_change_report,
    lift_idempotent_family,
    loewy_length_algebra,
    lower_bound_element_check,
    projective_dims_in_group_algebra,
    radical,
    radical_power_dims,
    simple_characters_vanish_on_radical,
)
from restriction import res_k_n, restriction_laws, restriction_surjectivity
from signed_compositions import all_compositions

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

COMMANDS = (
    "table",
    "cartan",
    "idempotents",
    "central-idempotents",
    "radical",
    "center",
    "loewy",
    "mult",
    "minpoly",
    "dims",
    "restrict-check",
    "verify",
)
SUITES = ("positivity", "orders", "theta", "loewy", "cartan", "longest", "restriction")
# Center dimensions for n = 1..5 over Q (and odd p) and over F_2
CENTER_DIMENSIONS = {0: (2, 4, 4, 5, 4), 2: (2, 4, 4, 6, 4)}


@dataclass(frozen=True)
class JobConfig:
    """One CLI job: command, group rank, field, output format and command options"""
    command: str
    n: int
    characteristic: int = 0
    fmt: str = "text"
    seed: int = ENGINE_CONFIG["SEED"]
    cap: Optional[int] = None
    left: Optional[str] = None
    right: Optional[str] = None
    elem: Optional[str] = None
    target: str = "algebra"
    k: Optional[int] = None
    ring: str = "Q"
    laws: bool = False
    suite: str = "all"
    basis: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"Unknown command '{self.command}'")
        if self.n < 1:
            raise UsageError(f"n must be at least 1, got {self.n}")
        if self.characteristic != 0 and not is_prime(self.characteristic):
            raise UsageError(f"--char must be 0 or a prime, got {self.characteristic}")
        if self.fmt not in OUTPUT_CONFIG["FORMATS"]:
            raise UsageError(f"--format must be one of {', '.join(OUTPUT_CONFIG['FORMATS'])}, got {self.fmt}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobConfig":
        return cls(
            command=args.command,
            n=args.n,
            characteristic=args.char,
            fmt=args.format,
            seed=args.seed,
            cap=args.cap,
            left=getattr(args, "left", None),
            right=getattr(args, "right", None),
            elem=getattr(args, "elem", None),
            target=getattr(args, "target", "algebra"),
            k=getattr(args, "k", None),
            ring=getattr(args, "ring", "Q"),
            laws=getattr(args, "laws", False),
            suite=getattr(args, "suite", "all"),
            basis=getattr(args, "basis", None),
        )

    @property
    def meta(self) -> Dict:
        return document_meta(self.n, self.characteristic, self.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="rank of the hyperoctahedral group")
    common.add_argument("--char", type=int, default=0, help="field characteristic: 0 for Q or a prime p")
    common.add_argument("--format", default="text", choices=OUTPUT_CONFIG["FORMATS"], help="output format")
    common.add_argument("--seed", type=int, default=ENGINE_CONFIG["SEED"], help="seed for randomized checks")
    common.add_argument("--cap", type=int, default=None, help="largest n the group may be enumerated for")

    parser = argparse.ArgumentParser(
        description="Exact computations in the Mantaci-Reutenauer algebra of the hyperoctahedral group",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("table", parents=[common], help="character table")
    sub.add_parser("cartan", parents=[common], help="Cartan matrix")
    idempotents = sub.add_parser("idempotents", parents=[common], help="lifted primitive idempotents")
    idempotents.add_argument("--basis", choices=("x", "x'"), default=None)
    central = sub.add_parser("central-idempotents", parents=[common], help="primitive central idempotents")
    central.add_argument("--basis", choices=("x", "x'"), default=None)
    sub.add_parser("radical", parents=[common], help="basis of the radical")
    sub.add_parser("center", parents=[common], help="basis of the center")
    loewy = sub.add_parser("loewy", parents=[common], help="Loewy length")
    loewy.add_argument("--target", choices=("algebra", "irr"), default="algebra")
    mult = sub.add_parser("mult", parents=[common], help="product x_C x_D")
    mult.add_argument("--left", required=True)
    mult.add_argument("--right", required=True)
    minpoly = sub.add_parser("minpoly", parents=[common], help="minimal polynomial of x_C")
    minpoly.add_argument("--elem", required=True)
    dims = sub.add_parser("dims", parents=[common], help="ideal and centralizer dimensions")
    dims.add_argument("--elem", default=None)
    restrict = sub.add_parser("restrict-check", parents=[common], help="surjectivity of Res_k^n")
    restrict.add_argument("--k", type=int, required=True)
    restrict.add_argument("--ring", choices=("Q", "Z"), default="Q")
    restrict.add_argument("--laws", action="store_true", help="also check the restriction laws")
    verify = sub.add_parser("verify", parents=[common], help="verification suites")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return parser


def _basis_for(config: JobConfig) -> str:
    if config.basis:
        if config.basis == "x'" and config.characteristic == 2:
            raise FieldError("The x' basis needs 2 to be invertible")
        return config.basis
    return "x" if config.characteristic == 2 else "x'"


def _elements_frame(elements, labels, basis: str) -> pd.DataFrame:
    context = elements[0].context if elements else None
    names = [str(C) for C in context.compositions] if context else []
    rows = []
    for a in elements:
        coords = a.x_prime_coords() if basis == "x'" else a.coords
        rows.append(list(coords))
    return pd.DataFrame(rows, index=labels, columns=names)


def _suite_positivity(config: JobConfig) -> Dict:
    if config.characteristic:
        raise DomainError("The positivity suite runs over Q only")
    report = positivity_suite(config.n, config.seed)
    return {**report["checks"], "failures": len(report["failures"])}


def _suite_orders(config: JobConfig) -> Dict:
    return order_relations_check(config.n)


def _suite_theta(config: JobConfig) -> Dict:
    n, p = config.n, config.characteristic
    context = get_context(n, p)
    report = {"triangularity": triangularity_check(n, p, config.seed)}
    comps = context.compositions
    report["theta_multiplicative"] = all(
        theta(context.basis_element(C) * context.basis_element(D))
        == theta(context.basis_element(C)) * theta(context.basis_element(D))
        for C in comps
        for D in comps
    )
    report["product_formula"] = all(
        theta_compatible_product_check(C, D, context)
        for C in comps
        for D in comps
        if C.is_parabolic() or D.is_semi_positive()
    )
    _, _, entries = character_table_matrix(n, p)
    if p == 0:
        report["table_triangular"] = is_lower_unitriangular_shape(entries)
        report["char_poly"] = char_poly_check(n, config.seed)
    else:
        try:
            matrix_inverse(get_context(n, p).field.coerce(entries), get_context(n, p).field)
            report["table_invertible"] = True
        except DomainError:
            report["table_invertible"] = False
    if n <= 3:
        report["closure"] = closure_check(n, p)["passed"]
    if p != 2:
        report["quasi_idempotents"] = quasi_idempotent_family(n, p)["passed"]
    report.update(theta_invariants(n, p))
    return report


def _suite_loewy(config: JobConfig) -> Dict:
    n, p = config.n, config.characteristic
    length = loewy_length_algebra(n, p)
    expected_irr = 1 if p == 0 else (n + 1 if p == 2 else n // p + 1)
    report = {
        "loewy_length": length,
        "within_bounds": n <= length <= 2 * n - 1 or n == 1,
        "irr_loewy_length": irr_loewy_length(n, p),
        "irr_matches": irr_loewy_length(n, p) == expected_irr,
        "radical_vanishes_under_characters": simple_characters_vanish_on_radical(n, p),
    }
    if p != 2:
        report["equals_n"] = length == n
    if n >= 2:
        report["lower_bound_element"] = lower_bound_element_check(n, p)
    return report


def _suite_cartan(config: JobConfig) -> Dict:
    n, p = config.n, config.characteristic
    family = lift_idempotent_family(n, p)
    report = dict(family.check())
    report["cartan_rows"] = cartan_matrix(n, p).shape[0]
    report["projective_dims"] = bool(projective_dims_in_group_algebra(n, p)["match"].all())
    report["radical_is_ideal"] = radical(n, p).is_two_sided_ideal()
    if p == 0 and n + 1 <= ENGINE_CONFIG["CARTAN_EMBED_MAX_N"]:
        report.update(cartan_properties(n))
    group_order = 2 ** n * math.factorial(n)
    if p == 0 or group_order % p:
        report["blocks_match_center"] = len(blocks(n, p).blocks) == center(n, p).dim
    elif p != 2:
        report["center_base_change"] = center_base_change_report(n, p)
    report["center_dim"] = center(n, p).dim
    if p in (0, 2, 3) and n <= len(CENTER_DIMENSIONS[0]):
        report["center_dim_matches"] = report["center_dim"] == CENTER_DIMENSIONS[2 if p == 2 else 0][n - 1]
    return report


def _suite_longest(config: JobConfig) -> Dict:
    report = longest_element_structure(config.n, config.characteristic)
    checks = {key: bool(value) for key, value in report.items() if isinstance(value, (bool, np.bool_))}
    checks["dims"] = list(report["dims"])
    checks["dims_match"] = report["dims"] == (report["expected_dim"], report["expected_dim"])
    return checks


def _suite_restriction(config: JobConfig) -> Dict:
    n = config.n
    report = {}
    for ring in ("Q", "Z"):
        report[f"surjective_{ring}"] = all(
            restriction_surjectivity(k, n, ring)["surjective"] for k in range(1, n + 1)
        )
    if n <= ENGINE_CONFIG["RESTRICTION_LAWS_MAX_N"]:
        report["laws"] = all(
            restriction_laws(D)["passed"] for D in all_compositions(n) if D.is_semi_positive()
        )
    return report


SUITE_RUNNERS = {
    "positivity": _suite_positivity,
    "orders": _suite_orders,
    "theta": _suite_theta,
    "loewy": _suite_loewy,
    "cartan": _suite_cartan,
    "longest": _suite_longest,
    "restriction": _suite_restriction,
}


def _passed(report: Dict) -> bool:
    """Every boolean entry is true; counts and nested reports are informational"""
    return all(value for value in report.values() if isinstance(value, (bool, np.bool_)))


def _verify(config: JobConfig) -> Tuple[int, str]:
    if config.suite == "all" and config.n > ENGINE_CONFIG["VERIFY_CAP_N"]:
        raise ResourceError(config.n, ENGINE_CONFIG["VERIFY_CAP_N"])
    names = SUITES if config.suite == "all" else (config.suite,)
    if config.suite == "all" and config.characteristic:
        names = tuple(name for name in names if name != "positivity")
    if config.suite == "all" and config.characteristic == 2:
        names = tuple(name for name in names if name != "longest")
    results = {}
    for name in names:
        logger.info(f"Running suite {name} for n={config.n}, char={config.characteristic}")
        results[name] = SUITE_RUNNERS[name](config)
    failed = [name for name, report in results.items() if not _passed(report)]
    results["passed"] = not failed
    if failed:
        logger.error(f"Verification failed for suites: {', '.join(failed)}")
    return (1 if failed else 0), render_report(results, config.fmt, config.meta)


def run(config: JobConfig) -> Tuple[int, str]:
    """Exit status and the rendered document for one job"""
    if config.cap is not None:
        os.environ["MRW_CAP_N"] = str(config.cap)
    n, p, fmt, meta = config.n, config.characteristic, config.fmt, config.meta
    command = config.command

    if command == "table":
        return 0, render_table(character_table(n, p), fmt, meta)
    if command == "cartan":
        return 0, render_table(cartan_matrix(n, p), fmt, meta)
    if command == "idempotents":
        family = lift_idempotent_family(n, p)
        basis = _basis_for(config)
        frame = _elements_frame(list(family.elements), [str(lam) for lam in family.labels], basis)
        return 0, render_table(frame, fmt, {**meta, "basis": basis})
    if command == "central-idempotents":
        decomposition = blocks(n, p)
        basis = _basis_for(config)
        labels = [" ".join(str(lam) for lam in block) for block in decomposition.blocks]
        frame = _elements_frame(list(decomposition.idempotents), labels, basis)
        return 0, render_table(frame, fmt, {**meta, "basis": basis})
    if command in ("radical", "center"):
        space = radical(n, p) if command == "radical" else center(n, p)
        elements = space.elements()
        if not elements:
            return 0, render_report({"dim": 0}, fmt, meta)
        frame = _elements_frame(elements, [f"b{i + 1}" for i in range(space.dim)], "x")
        return 0, render_table(frame, fmt, {**meta, "dim": space.dim})
    if command == "loewy":
        if config.target == "algebra":
            dims = list(radical_power_dims(n, p))
        else:
            dims = irr_radical_power_dims(n, p)
        report = {"target": config.target, "loewy_length": len(dims), "radical_power_dims": dims}
        return 0, render_report(report, fmt, meta)
    if command == "mult":
        context = get_context(n, p)
        product = multiply(context.basis_element(config.left), context.basis_element(config.right))
        if fmt == "json":
            return 0, dumps(element_document(product, meta))
        return 0, render_table(element_frame(product), fmt, meta)
    if command == "minpoly":
        context = get_context(n, p)
        a = context.basis_element(config.elem)
        f = min_poly(a)
        report = {
            "element": str(context.composition(config.elem)),
            "polynomial": f.format(candidates=list(theta(a).values)),
            "coefficients": f.coefficient_strings(),
        }
        return 0, render_report(report, fmt, meta)
    if command == "dims":
        if config.elem is None:
            return 0, render_table(dimension_table(n, p), fmt, meta)
        context = get_context(n, p)
        dims = ideal_dimensions(context.basis_element(config.elem))
        frame = pd.DataFrame([dims], index=[str(context.composition(config.elem))])
        return 0, render_table(frame, fmt, meta)
    if command == "restrict-check":
        if config.k is None:
            raise UsageError("restrict-check needs --k")
        report = restriction_surjectivity(config.k, n, config.ring)
        if config.laws:
            report["laws"] = restriction_laws(res_k_n(config.k, n).D)
        ok = report["surjective"] and (not config.laws or report["laws"]["passed"])
        return (0 if ok else 1), render_report(report, fmt, meta)
    if command == "verify":
        return _verify(config)
    raise UsageError(f"Unknown command '{command}'")


def _configure_file_logging():
    if LOG_CONFIG["FILE"]:
        handler = logging.FileHandler(LOG_CONFIG["FILE"])
        handler.setFormatter(logging.Formatter(LOG_CONFIG["FORMAT"]))
        logging.getLogger().addHandler(handler)


_VALUE_FLAGS = ("--left", "--right", "--elem")


def _attach_values(argv: Sequence[str]) -> list:
    """Glue "--elem -3,1" into "--elem=-3,1" so argparse does not read the value as a flag"""
    out = []
    tokens = iter(argv)
    for token in tokens:
        if token in _VALUE_FLAGS:
            value = next(tokens, None)
            if value is None:
                out.append(token)
            elif value.startswith("-") and not value.startswith("--"):
                out.append(f"{token}={value}")
            else:
                out.extend([token, value])
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_file_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        config = JobConfig.from_args(args)
        status, document = run(config)
    except (UsageError, ResourceError, DomainError, FieldError, SizeMismatchError) as e:
        logger.error(f"Error running job: {str(e)}")
        print(f"[error] {e}", file=sys.stderr)
        return 2
    except ConsistencyError as e:
        logger.error(f"Error verifying job: {str(e)}")
        print(f"[error] {e}", file=sys.stderr)
        return 1
    except EngineError as e:
        logger.error(f"Error running job: {str(e)}")
        print(f"[error] {e}", file=sys.stderr)
        return 1
    print(document)
    return status


if __name__ == "__main__":
    sys.exit(main())
