from dataclasses import dataclass
import logging
import os
import time

from .conventions import CONVENTIONS
from .exterior import format_form
from .lie_core import BUILTIN_ALGEBRAS, InvariantPolynomial, LieAlgebra, load_lie_algebra
from .report import RunReport, digest
from .spectral_engine import ConeLemmaReport, corrupt_triple, minimal_residue_triple, verify_cone_lemma
from .textio import format_polynomial
from .transgression import transgress
from .wonderful import (
    MODES,
    RootSystemData,
    WonderfulAlgebra,
    geometric_translation,
    residue_class,
)

logger = logging.getLogger(__name__)


@dataclass
class RuntimeContext:
    config: dict
    timing: bool = False

    def section(self, name: str) -> dict:
        return self.config.get(name, {})


def _text(value) -> str | None:
    return None if value is None else str(value)


def _check_ce_sign(context: RuntimeContext) -> None:
    sign = context.section("transgression").get("ce_sign", CONVENTIONS.ce_sign)
    if sign != CONVENTIONS.ce_sign:
        raise ValueError(f"Only ce_sign = {CONVENTIONS.ce_sign} is implemented, config asks for {sign}.")


def resolve_algebra(source: str) -> tuple[LieAlgebra, str]:
    """Built-in name or JSON file; the second value identifies the input in reports."""
    if source in BUILTIN_ALGEBRAS:
        return BUILTIN_ALGEBRAS[source](), source
    g = load_lie_algebra(source)
    with open(source, "rb") as file:
        return g, f"{os.path.basename(source)}:{digest(file.read().decode('utf-8'))[:16]}"


def resolve_root_system(type_name: str | None, cartan_file: str | None) -> RootSystemData:
    if cartan_file is not None:
        return RootSystemData.from_file(cartan_file)
    return RootSystemData.from_type(type_name or "A1")


class TransgressionWorkflow:

    def __init__(self, context: RuntimeContext, algebra: str, polynomial: str, degree: int | None = None, pivot_order=None):
        self.context = context
        _check_ce_sign(context)
        self.g, self.algebra_id = resolve_algebra(algebra)
        self.polynomial_text = polynomial
        self.degree = degree
        self.pivot_order = pivot_order if pivot_order is not None else context.section("transgression").get("pivot_order", "lex")

        logger.info(f"Initialized TransgressionWorkflow for {self.algebra_id} (dimension {self.g.dim}).")

    def run(self) -> RunReport:
        start = time.perf_counter()
        g = self.g
        p = InvariantPolynomial.parse(self.polynomial_text, g, self.degree)
        result = transgress(p, g, self.pivot_order)
        labels = g.dual_labels
        factor = result.factor_against_eta(g)

        outputs = {
            "polynomial": p.format(g),
            "degree": p.degree,
            "chain": {f"{p_},{q}": element.format(labels) for (p_, q), element in sorted(result.chain.entries.items())},
            "form": format_form(result.form, labels),
            "class_degree": result.cohomology_class.degree,
            "class_coordinates": [str(c) for c in result.cohomology_class.coordinates()],
            "class_is_zero": result.cohomology_class.is_zero(),
            "factor_against_eta": _text(factor),
        }
        assertions = {"chain_recurrence": result.chain.check(g)}

        elapsed = time.perf_counter() - start
        logger.info(f"Transgression finished in {elapsed:.3f} s")
        return RunReport(
            "transgress",
            {"algebra": self.algebra_id, "polynomial": self.polynomial_text, "degree": self.degree, "pivot_order": str(self.pivot_order)},
            outputs,
            assertions,
            timing={"seconds": round(elapsed, 6)} if self.context.timing else None,
        )


class WonderfulWorkflow:

    def __init__(
        self,
        context: RuntimeContext,
        polynomial: str,
        type_name: str | None = None,
        cartan_file: str | None = None,
        mode: str = "noneq",
        degree_bound: int | None = None,
    ):
        self.context = context
        settings = context.section("wonderful")
        if mode not in MODES:
            raise ValueError(f"Unknown mode {mode!r}. Choose one of {sorted(MODES)}.")
        self.root_system = resolve_root_system(type_name, cartan_file)
        self.algebra = WonderfulAlgebra(self.root_system)
        self.polynomial_text = polynomial
        self.mode = MODES[mode]
        self.degree_bound = degree_bound if degree_bound is not None else settings.get("degree_bound", 6)
        self.check_membership = settings.get("check_membership", True)

        logger.info(f"Initialized WonderfulWorkflow for {self.root_system.type_label} (rank {self.root_system.rank}).")

    def run(self) -> RunReport:
        start = time.perf_counter()
        alg = self.algebra
        p = alg.parse(self.polynomial_text)
        result = residue_class(p, alg, self.mode, self.degree_bound, self.check_membership)

        d = result.degree
        expected_beta = (alg.evaluate(p, alg.u) - alg.evaluate(p, alg.v)) * 2**d
        recomposed = sum((x * f for x, f in zip(alg.x, result.components)), alg.uv_ring.zero)

        outputs = {
            "polynomial": format_polynomial(p),
            "degree": d,
            "beta": format_polynomial(result.beta),
            "beta_xy": alg.format_xy(result.beta),
            "components": [format_polynomial(f) for f in result.components],
            "components_xy": [alg.format_xy(f) for f in result.components],
            "mode": result.mode,
            "class_coordinates": [str(c) for c in result.coordinates],
            "class_normal_form": [format_polynomial(f) for f in result.normal_form],
            "class_is_zero": result.is_zero,
        }
        if alg.rank == 1:
            outputs["p1_x_p1"] = format_polynomial(geometric_translation(result.components, alg))

        assertions = {
            "beta_identity": result.beta == expected_beta,
            "recomposition": recomposed == result.beta,
        }
        if result.membership:
            assertions["membership"] = all(result.membership)

        elapsed = time.perf_counter() - start
        logger.info(f"Residue computation finished in {elapsed:.3f} s")
        inputs = {
            "cartan": [list(row) for row in self.root_system.cartan],
            "type": self.root_system.type_label,
            "polynomial": self.polynomial_text,
            "mode": self.mode,
            "degree_bound": self.degree_bound,
            "check_membership": self.check_membership,
        }
        return RunReport(
            "wonderful residue",
            inputs,
            outputs,
            assertions,
            timing={"seconds": round(elapsed, 6)} if self.context.timing else None,
        )


class ConeLemmaWorkflow:

    def __init__(self, context: RuntimeContext, inject_corrupt: bool = False, **overrides):
        self.context = context
        settings = dict(context.section("spectral"))
        settings.update({k: v for k, v in overrides.items() if v is not None})
        self.seed = int(settings.get("seed", 1))
        self.trials = int(settings.get("trials", 100))
        self.max_dim = int(settings.get("max_dim", 4))
        self.max_length = int(settings.get("max_length", 3))
        self.k_length = int(settings.get("k_length", 2))
        if self.trials < 0 or self.max_dim < 1 or self.max_length < 1 or self.k_length < 1:
            raise ValueError(
                f"Invalid cone lemma settings: trials={self.trials}, max_dim={self.max_dim}, "
                f"max_length={self.max_length}, k_length={self.k_length}."
            )
        self.inject_corrupt = inject_corrupt

        logger.info(f"Initialized ConeLemmaWorkflow with seed {self.seed} and {self.trials} trials.")

    def run(self) -> tuple[ConeLemmaReport, RunReport]:
        start = time.perf_counter()
        extra = [corrupt_triple(minimal_residue_triple())] if self.inject_corrupt else []
        trials = verify_cone_lemma(
            seed=self.seed,
            trials=self.trials,
            max_dim=self.max_dim,
            max_length=self.max_length,
            k_length=self.k_length,
            extra_triples=extra,
        )
        frame = trials.trials
        outputs = {
            "trials": len(frame),
            "passed_trials": int(frame["passed"].sum()) if len(frame) else 0,
            "checks": int(frame["checks"].sum()) if len(frame) else 0,
            "nontrivial_checks": int(frame["nontrivial"].sum()) if len(frame) else 0,
            "failures": trials.failures,
        }

        elapsed = time.perf_counter() - start
        logger.info(f"Cone lemma verification finished in {elapsed:.3f} s")
        inputs = {
            "seed": self.seed,
            "trials": self.trials,
            "max_dim": self.max_dim,
            "max_length": self.max_length,
            "k_length": self.k_length,
            "inject_corrupt": self.inject_corrupt,
        }
        report = RunReport(
            "ss verify-cone",
            inputs,
            outputs,
            {"commutes": trials.passed},
            timing={"seconds": round(elapsed, 6)} if self.context.timing else None,
        )
        return trials, report
