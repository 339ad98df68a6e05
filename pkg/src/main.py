#!/usr/bin/env python3
"""
COB Entanglement Detector - Main Application
============================================

Command-line front end for the complete-orthogonal-basis criteria:
basis validation, single-state verdicts, threshold scans, tensor dumps,
soundness sweeps and reproduction of the pinned worked examples.

Exit codes: 0 success, 1 validation failure, 2 input error, 130 interrupted.
"""

import argparse
import logging
import sys
import time

from .config import (
    DEFAULT_BISECTION_TOL, DEFAULT_GRID, DEFAULT_SAMPLE_COUNT, DEFAULT_SEED,
    EXAMPLE_PINS, LOG_FILE, LOG_FORMAT, REPRODUCE_TOL, COB_TOL,
)
from .generators.csv_generator import CSVGenerator
from .generators.json_generator import JSONGenerator
from .quantum.cob import (
    BUILTIN_BASES, builtin_basis, generate_cob, load_basis, resolve_basis, save_basis,
    validate_cob,
)
from .quantum.correlations import correlation_tensor, tensor_rows
from .quantum.criteria import (
    COMPETITORS, CRITERIA, CLAUSES, CONVENTIONS, CriterionSpec, PartitionSpec,
    TripartiteCoefficients, evaluate_criterion,
)
from .quantum.oracle import FAMILIES, SamplerConfig, verify_bound_suite
from .quantum.scan import scan_family
from .quantum.states import NAMED_STATES, ORIENTATIONS, evaluate, noisy_family
from .quantum.states import resolve_state as state_from_spec
from .utils.errors import (
    BasisValidationError, InputError, NumericalIntegrityError, ParameterError,
)
from .utils.file_store import load_document
from .utils.text_utils import parse_coeffs, parse_grid, parse_name_list

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2

# Keys a --config file may set; they mirror the long flag names.
CONFIG_KEYS = (
    "state", "basis", "criterion", "partition", "coeffs", "grid", "tol", "format",
    "seed", "party", "clause", "x", "orientation", "convention", "competitors",
    "count", "family", "dims", "out",
)

BUILTIN_DEFAULTS = {
    "criterion": "thm2",
    "grid": DEFAULT_GRID,
    "tol": DEFAULT_BISECTION_TOL,
    "seed": DEFAULT_SEED,
    "party": 1,
    "clause": "i",
    "convention": "averaged",
    "count": DEFAULT_SAMPLE_COUNT,
}


def build_parser():
    """Argument parser with one sub-command per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys mirror the long flag names")
    common.add_argument("--log-file", default=LOG_FILE, help="also write the log to this file")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--quiet", action="store_true", help="warnings and errors only")

    state_opts = argparse.ArgumentParser(add_help=False)
    state_opts.add_argument("--state", help=f"named state ({', '.join(NAMED_STATES)}) or state file")
    state_opts.add_argument("--x", type=float, help="noise parameter; omit to use the state as is")
    state_opts.add_argument("--orientation", choices=ORIENTATIONS, help="white-noise orientation")
    state_opts.add_argument("--basis", action="append", help="basis name or file, repeat per subsystem")
    state_opts.add_argument("--seed", type=int, help="seed for generated bases and sampling")

    criterion_opts = argparse.ArgumentParser(add_help=False)
    criterion_opts.add_argument("--criterion", choices=CRITERIA)
    criterion_opts.add_argument("--party", type=int, help="f for thm1, l1 for thm4i")
    criterion_opts.add_argument("--clause", choices=CLAUSES, help="thm1 clause")
    criterion_opts.add_argument("--partition", help='partition such as "12|34" or "1,2|3,4"')
    criterion_opts.add_argument("--coeffs", help="c11,c12,c21,c22,c31,c32")
    criterion_opts.add_argument("--convention", choices=CONVENTIONS, help="thm2 averaging convention")

    output_opts = argparse.ArgumentParser(add_help=False)
    output_opts.add_argument("--format", choices=("csv", "json"))
    output_opts.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="detect_entanglement",
        description="Entanglement criteria from complete-orthogonal-basis correlation tensors.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    basis = commands.add_parser("basis", help="validate, show or generate a basis")
    basis_commands = basis.add_subparsers(dest="basis_command", required=True)
    for name in ("validate", "show"):
        sub = basis_commands.add_parser(name, parents=[common])
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--name", choices=list(BUILTIN_BASES))
        source.add_argument("--file")
        sub.add_argument("--tol", type=float, default=COB_TOL)
    generate = basis_commands.add_parser("generate", parents=[common])
    generate.add_argument("--dim", type=int, required=True)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out")

    commands.add_parser("verdict", parents=[common, state_opts, criterion_opts],
                        help="evaluate one criterion on one state")

    scan = commands.add_parser("scan", parents=[common, state_opts, criterion_opts, output_opts],
                               help="scan the noise parameter and locate the threshold")
    scan.add_argument("--grid", help="a:b:step inside [0, 1]")
    scan.add_argument("--tol", type=float, help="bisection tolerance (>= 1e-8)")
    scan.add_argument("--competitors", help=f"comma list from {', '.join(COMPETITORS)}")
    scan.add_argument("--summary", help="also write the JSON summary to this file")

    reproduce = commands.add_parser("reproduce", parents=[common, output_opts],
                                    help="reproduce a pinned worked example")
    reproduce.add_argument("example", type=int, choices=sorted(EXAMPLE_PINS))
    reproduce.add_argument("--grid")
    reproduce.add_argument("--tol", type=float)

    commands.add_parser("tensor", parents=[common, state_opts, output_opts],
                        help="dump the correlation tensor as CSV")

    verify = commands.add_parser("verify", parents=[common, criterion_opts, output_opts],
                                 help="sweep sampled separable states against a bound")
    verify.add_argument("--family", choices=FAMILIES)
    verify.add_argument("--dims", help="comma list such as 2,2,2")
    verify.add_argument("--count", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--basis", action="append")
    verify.add_argument("--symmetrize", action="store_true")

    return parser


class EntanglementApplication:
    """Main application class for the entanglement detector."""

    def __init__(self, argv=None):
        """Parse arguments and configure logging."""
        self.args = build_parser().parse_args(argv)
        self.setup_logging()
        self.settings = {}

    def setup_logging(self):
        """Log to stderr (stdout carries CSV/JSON) and optionally to a file."""
        level = logging.INFO
        if self.args.verbose:
            level = logging.DEBUG
        elif self.args.quiet:
            level = logging.WARNING

        handlers = [logging.StreamHandler(sys.stderr)]
        if self.args.log_file:
            handlers.append(logging.FileHandler(self.args.log_file, mode="w", encoding="utf-8"))

        logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers)
        logging.getLogger().setLevel(level)
        logging.debug("=== COB Entanglement Detector Initialized ===")

    def setup_settings(self):
        """
        Merge built-in defaults, the --config file and command-line flags.

        Returns:
            dict: Effective settings
        """
        settings = dict(BUILTIN_DEFAULTS)
        if self.args.config:
            document = load_document(self.args.config)
            unknown = set(k.replace("-", "_") for k in document) - set(CONFIG_KEYS) - {"last_updated"}
            if unknown:
                logging.warning(f"Ignoring unknown config keys: {', '.join(sorted(unknown))}")
            for key, value in document.items():
                key = key.replace("-", "_")
                if key in CONFIG_KEYS:
                    settings[key] = value
            logging.info(f"Loaded configuration from {self.args.config}")

        for key in CONFIG_KEYS:
            value = getattr(self.args, key, None)
            if value is not None:
                settings[key] = value
        self.settings = settings
        return settings

    # ----- resolution helpers -----

    def resolve_bases(self, dims):
        specs = self.settings.get("basis")
        if isinstance(specs, str):
            specs = [specs]
        seed = int(self.settings.get("seed", 0))
        if not specs:
            return [resolve_basis(None, d, seed) for d in dims]
        if len(specs) == 1:
            specs = specs * len(dims)
        if len(specs) != len(dims):
            raise InputError(f"{len(specs)} bases given for {len(dims)} subsystems")
        return [resolve_basis(spec, d, seed) for spec, d in zip(specs, dims)]

    def resolve_family(self):
        spec = self.settings.get("state")
        if not spec:
            raise InputError("--state is required")
        base = spec if spec in NAMED_STATES else state_from_spec(spec)
        return noisy_family(base, self.settings.get("orientation"))

    def resolve_state(self):
        """The state itself, or rho(x) of its noise family when --x is set."""
        if self.settings.get("x") is not None:
            return evaluate(self.resolve_family(), self.settings["x"])
        spec = self.settings.get("state")
        if not spec:
            raise InputError("--state is required")
        return state_from_spec(spec)

    def resolve_criterion(self, n, overrides=None):
        s = dict(self.settings)
        s.update(overrides or {})

        coeffs = s.get("coeffs")
        if coeffs is None:
            coeffs = TripartiteCoefficients()
        else:
            values = parse_coeffs(coeffs) if isinstance(coeffs, str) else coeffs
            coeffs = TripartiteCoefficients.from_sequence(values)

        partition = s.get("partition")
        if partition is not None and not isinstance(partition, PartitionSpec):
            partition = PartitionSpec.parse(partition, n)

        return CriterionSpec(
            criterion=s.get("criterion"),
            coeffs=coeffs,
            party=int(s.get("party", 1)),
            clause=s.get("clause", "i"),
            partition=partition,
            convention=s.get("convention", "averaged"),
        )

    def _output_path(self):
        return self.settings.get("out")

    # ----- commands -----

    def cmd_basis(self):
        args = self.args
        if args.basis_command == "generate":
            basis = generate_cob(args.dim, args.seed)
            if args.out:
                save_basis(basis, args.out)
            else:
                JSONGenerator().write(basis.to_document())
            logging.info(f"Generated {basis.label}")
            return EXIT_OK

        if args.name:
            # validate the printed entries directly so a failure is reported, not raised
            ops = BUILTIN_BASES[args.name][0]()
            report = validate_cob(ops, tol=args.tol, label=args.name)
            basis = builtin_basis(args.name) if report.passed else None
        else:
            try:
                basis = load_basis(args.file, tol=args.tol)
                report = validate_cob(basis.operators, tol=args.tol, label=basis.label)
            except BasisValidationError as e:
                basis, report = None, e.report

        if args.basis_command == "validate":
            JSONGenerator().write(report.to_dict())
            logging.info(f"{report.label}: {report.summary()}")
            return EXIT_OK if report.passed else EXIT_VALIDATION

        if basis is None:
            logging.error(f"{report.label}: {report.summary()}")
            return EXIT_VALIDATION
        JSONGenerator().write(basis.to_document())
        logging.info(f"Printed {len(basis)} operators of {basis.label}")
        return EXIT_OK

    def cmd_verdict(self):
        rho = self.resolve_state()
        bases = self.resolve_bases(rho.dims)
        spec = self.resolve_criterion(rho.n_parties)
        report = evaluate_criterion(rho, bases, spec)

        payload = report.to_dict()
        if self.settings.get("x") is not None:
            payload["x"] = float(self.settings["x"])
        JSONGenerator().write(payload)
        logging.info(f"{spec.criterion}: statistic {report.statistic:.6f}, bound {report.bound:.6f}, "
                     f"verdict {report.verdict}")
        return EXIT_OK

    def cmd_scan(self):
        family = self.resolve_family()
        bases = self.resolve_bases(family.dims)
        spec = self.resolve_criterion(len(family.dims))
        grid = parse_grid(str(self.settings["grid"]))
        competitors = self.settings.get("competitors") or []
        if isinstance(competitors, str):
            competitors = parse_name_list(competitors)

        result = scan_family(family, bases, spec, grid, float(self.settings["tol"]), competitors)
        summary = result.to_dict()
        summary.update(criterion=spec.criterion, state=family.name, orientation=family.orientation,
                       basis_labels=[b.label for b in bases])

        if self.settings.get("format", "csv") == "json":
            JSONGenerator(self._output_path()).write(summary)
        else:
            CSVGenerator(self._output_path()).write_scan(result)
        if getattr(self.args, "summary", None):
            JSONGenerator(self.args.summary).write(summary)

        if not result.threshold_found:
            logging.warning("No threshold inside the grid")
        return EXIT_OK

    def cmd_reproduce(self):
        example = self.args.example
        grid = parse_grid(str(self.settings["grid"]))
        tol = float(self.settings["tol"])
        rows = []
        failed = False

        for pin in EXAMPLE_PINS[example]:
            family = noisy_family(pin["state"])
            bases = [builtin_basis(name) for name in pin["bases"]]
            overrides = {k: pin[k] for k in ("criterion", "coeffs", "party", "clause", "partition", "convention")
                         if k in pin}
            overrides.setdefault("coeffs", TripartiteCoefficients().as_tuple())
            overrides.setdefault("partition", None)
            overrides.setdefault("convention", "averaged")
            spec = self.resolve_criterion(len(family.dims), overrides)

            start = time.time()
            result = scan_family(family, bases, spec, grid, tol)
            computed = result.threshold
            reference = pin["reference_threshold"]

            if computed is not None and abs(computed - reference) <= REPRODUCE_TOL:
                status = "PASS"
            elif "note" in pin:
                status = "DEVIATES"
            else:
                status = "FAIL"
                failed = True

            rows.append({
                "example": example,
                "row": pin["row"],
                "criterion": spec.criterion,
                "reference_threshold": reference,
                "computed_threshold": computed,
                "status": status,
                "note": pin.get("note", "") if status != "PASS" else "",
                "convention": spec.convention if spec.criterion == "thm2" else None,
            })
            shown = "absent" if computed is None else f"{computed:.4f}"
            logging.info(f"Example {example} [{pin['row']}]: reference {reference}, computed {shown}, "
                         f"{status} ({time.time() - start:.2f}s)")

        if self.settings.get("format", "csv") == "json":
            JSONGenerator(self._output_path()).write({"example": example, "tol": REPRODUCE_TOL, "rows": rows})
        else:
            CSVGenerator(self._output_path()).write_reproduction(rows)
        return EXIT_VALIDATION if failed else EXIT_OK

    def cmd_tensor(self):
        rho = self.resolve_state()
        bases = self.resolve_bases(rho.dims)
        tensor = correlation_tensor(rho, bases)
        CSVGenerator(self._output_path()).write_tensor(tensor, tensor_rows(tensor))
        logging.info(f"Dumped {tensor.values.size} coefficients in bases {', '.join(tensor.basis_labels)}")
        return EXIT_OK

    def cmd_verify(self):
        s = self.settings
        if not s.get("family") or not s.get("dims"):
            raise InputError("verify needs --family and --dims")
        dims = s["dims"]
        if isinstance(dims, str):
            try:
                dims = tuple(int(p) for p in dims.split(","))
            except ValueError:
                raise InputError(f"invalid dims '{dims}'")
        dims = tuple(dims)

        spec = self.resolve_criterion(len(dims))
        cfg = SamplerConfig(
            seed=int(s["seed"]),
            count=int(s["count"]),
            dims=dims,
            family=s["family"],
            partition=spec.partition,
            symmetrize=bool(getattr(self.args, "symmetrize", False)),
        )
        bases = self.resolve_bases(dims)
        report = verify_bound_suite(cfg, spec, bases)
        JSONGenerator(self._output_path()).write(report.to_dict())
        return EXIT_OK if report.sound else EXIT_VALIDATION

    def run(self):
        """
        Dispatch the sub-command and map errors to exit codes.

        Returns:
            int: Exit code
        """
        handlers = {
            "basis": self.cmd_basis,
            "verdict": self.cmd_verdict,
            "scan": self.cmd_scan,
            "reproduce": self.cmd_reproduce,
            "tensor": self.cmd_tensor,
            "verify": self.cmd_verify,
        }
        try:
            self.setup_settings()
            return handlers[self.args.command]()
        except BasisValidationError as e:
            logging.error(str(e))
            JSONGenerator().write(e.report.to_dict())
            return EXIT_VALIDATION
        except (InputError, ParameterError) as e:
            logging.error(f"Input error: {e}")
            return EXIT_INPUT
        except NumericalIntegrityError as e:
            logging.error(f"Numerical integrity error: {e}")
            return EXIT_VALIDATION


def main(argv=None):
    """Main entry point for the application."""
    try:
        app = EntanglementApplication(argv)
        sys.exit(app.run())

    except KeyboardInterrupt:
        logging.info("Application interrupted by user")
        sys.exit(130)
    except SystemExit:
        raise
    except Exception as e:
        logging.error(f"Unexpected error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
