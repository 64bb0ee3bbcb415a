"""End-to-end extremality decision with self-verifying certificates.

Two routes are implemented.  The *fast* route assembles the linear system
on the 4x-refined lattice and decides by its kernel: a nontrivial kernel
always disproves extremality, and a trivial kernel proves it whenever the
function is diagonally constrained.  The *structural* route classifies
the triangles first: when every triangle is forced affine it decides by
the coarse system, otherwise it builds the explicit bump or wave
perturbation for the witness component.

Every negative verdict ships the two distinct minimal functions averaging
back to the input; every positive verdict ships the rank evidence.
Verification re-derives everything from the input and the certificate and
trusts no intermediate state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .additivity import Triple, enumerate_additive_triples, is_diagonally_constrained
from .geometry import Rat
from .imposing import build_graph, classify
from .linsys import KernelReport, assemble, kernel
from .minimality import MinimalityReport, check_minimality
from .perturb import (
    PerturbationKind,
    build_bump_perturbation,
    build_wave_perturbation,
    make_pair,
    scaled_pair,
)
from .piecewise import PLFunction, SlackTable, as_resolution_one, refine


class Mode(Enum):
    FAST = "fast"
    STRUCTURAL = "structural"
    BOTH = "both"


class Extremality(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class PipelineError(RuntimeError):
    """An internal invariant broke (path disagreement, unverifiable pair)."""


@dataclass(frozen=True)
class NotExtremeCertificate:
    pi1: PLFunction
    pi2: PLFunction
    kind: PerturbationKind
    epsilon: Rat

    @property
    def construction(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class ExtremeCertificate:
    kernel_dimension: int
    rank: int
    variables: int
    resolution: int


Certificate = NotExtremeCertificate | ExtremeCertificate


@dataclass(frozen=True)
class Verdict:
    minimal: bool
    diagonally_constrained: bool | None
    extreme: Extremality
    path: Mode
    certificate: Certificate | None
    timings: dict[str, float]
    report: MinimalityReport | None = None
    offending_triple: Triple | None = None


@dataclass
class _Workspace:
    """Lazily shared heavy intermediates of one decision run."""

    pl: PLFunction
    timings: dict[str, float] = field(default_factory=dict)
    _fine: PLFunction | None = None
    _table: SlackTable | None = None
    _aset: object | None = None
    _epsilon: Rat | None = None

    def timed(self, stage: str, fn):
        start = time.perf_counter()
        out = fn()
        self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - start
        return out

    @property
    def fine(self) -> PLFunction:
        if self._fine is None:
            self._fine = self.timed("refine", lambda: refine(self.pl))
        return self._fine

    @property
    def table(self) -> SlackTable:
        if self._table is None:
            self._table = self.timed("slack_table", lambda: SlackTable(self.fine))
        return self._table

    @property
    def additive_set(self):
        if self._aset is None:
            self._aset = self.timed(
                "additive_triples",
                lambda: enumerate_additive_triples(self.pl, self.table),
            )
        return self._aset

    @property
    def epsilon(self) -> Rat:
        if self._epsilon is None:
            self._epsilon = self.table.min_positive
        return self._epsilon


def decide(pl: PLFunction, mode: Mode = Mode.FAST) -> Verdict:
    """Decide extremality of a minimal function, with evidence.

    Non-minimal inputs are rejected up front (verdict carries the failing
    report).  A fine-grid input is reinterpreted over the finer complex,
    which leaves both minimality and extremality unchanged.
    """
    pl = as_resolution_one(pl)
    ws = _Workspace(pl)
    report = ws.timed("minimality", lambda: check_minimality(pl))
    if not report.minimal:
        return Verdict(
            minimal=False,
            diagonally_constrained=None,
            extreme=Extremality.INCONCLUSIVE,
            path=mode,
            certificate=None,
            timings=ws.timings,
            report=report,
        )

    aset = ws.additive_set
    diag, offender = is_diagonally_constrained(aset)

    if mode == Mode.FAST:
        extreme, cert = _decide_fast(ws, diag)
    elif mode == Mode.STRUCTURAL:
        extreme, cert = _decide_structural(ws, diag)
    else:
        extreme_f, cert_f = _decide_fast(ws, diag)
        extreme_s, cert_s = _decide_structural(ws, diag)
        if {extreme_f, extreme_s} == {Extremality.YES, Extremality.NO}:
            raise PipelineError(
                f"paths disagree: fast={extreme_f.value} structural={extreme_s.value}"
            )
        if extreme_f != Extremality.INCONCLUSIVE:
            extreme, cert = extreme_f, cert_f
        else:
            extreme, cert = extreme_s, cert_s

    return Verdict(
        minimal=True,
        diagonally_constrained=diag,
        extreme=extreme,
        path=mode,
        certificate=cert,
        timings=ws.timings,
        report=report,
        offending_triple=offender,
    )


def _decide_fast(ws: _Workspace, diag: bool):
    sys4 = ws.timed("assemble_fine", lambda: assemble(ws.pl, 4, ws.table))
    ker = ws.timed("kernel_fine", lambda: kernel(sys4))
    if ker.dimension == 0:
        cert = ExtremeCertificate(0, ker.rank, ker.variables, 4)
        if diag:
            return Extremality.YES, cert
        return Extremality.INCONCLUSIVE, None
    cert = ws.timed(
        "kernel_certificate",
        lambda: _kernel_certificate(ws, ker),
    )
    return Extremality.NO, cert


def _decide_structural(ws: _Workspace, diag: bool):
    graph = ws.timed("imposing_graph", lambda: build_graph(ws.additive_set))
    cls = ws.timed(
        "classification", lambda: classify(ws.pl, graph, ws.additive_set)
    )
    if cls.affine_imposing:
        sys1 = ws.timed("assemble_coarse", lambda: assemble(ws.pl, 1))
        ker = ws.timed("kernel_coarse", lambda: kernel(sys1))
        if ker.dimension == 0:
            return Extremality.YES, ExtremeCertificate(0, ker.rank, ker.variables, 1)
        cert = ws.timed(
            "kernel_certificate", lambda: _kernel_certificate(ws, ker)
        )
        return Extremality.NO, cert
    if not diag:
        # The explicit perturbations are only proven sound for diagonally
        # constrained functions; fall back to the unconditional fine kernel.
        return _decide_fast(ws, diag)
    component = graph.component_of(cls.witness)
    if cls.witness_outside_both:
        pert = ws.timed(
            "perturbation", lambda: build_bump_perturbation(ws.pl, component)
        )
        kind = PerturbationKind.BUMP
    else:
        pert = ws.timed(
            "perturbation", lambda: build_wave_perturbation(ws.pl, component)
        )
        kind = PerturbationKind.WAVE
    eps = ws.epsilon
    hi, lo = ws.timed("perturbation", lambda: make_pair(ws.pl, pert, eps))
    cert = NotExtremeCertificate(hi, lo, kind, eps)
    _require_valid_pair(ws, cert)
    return Extremality.NO, cert


def _kernel_certificate(ws: _Workspace, ker: KernelReport) -> NotExtremeCertificate:
    cert = kernel_to_certificate(ws.pl, ker.basis[0], table=ws.table)
    _require_valid_pair(ws, cert)
    return cert


def kernel_to_certificate(
    pl: PLFunction, vec, table: SlackTable | None = None
) -> NotExtremeCertificate:
    """Turn a kernel vector into the explicit pair of minimal functions.

    The vector is interpolated over its own lattice and scaled by
    eps / (3 * max |value|); the max is attained at a lattice point since
    the extension is piecewise linear.
    """
    pl = as_resolution_one(pl)
    if all(v == 0 for v in vec):
        raise ValueError("kernel vector must be nontrivial")
    size_sq = len(vec)
    size = int(round(size_sq**0.5))
    if size * size != size_sq or size % pl.q != 0:
        raise ValueError("kernel vector length does not match any lattice")
    n = size // pl.q
    vals = tuple(
        tuple(vec[i * size + j] for j in range(size)) for i in range(size)
    )
    bar = PLFunction(pl.q, n, pl.f, vals)
    if n == 1:
        bar = refine(bar)
    fine = refine(pl)
    if table is None:
        table = SlackTable(fine)
    eps = table.min_positive
    maxabs = max(abs(v) for row in bar.values for v in row)
    amp = eps / (3 * maxabs)
    hi, lo = scaled_pair(fine, bar, amp)
    return NotExtremeCertificate(hi, lo, PerturbationKind.KERNEL, eps)


def _require_valid_pair(ws: _Workspace, cert: NotExtremeCertificate) -> None:
    result = verify_certificate(ws.pl, cert)
    if not result:
        raise PipelineError(
            "constructed certificate failed verification: "
            + "; ".join(result.reasons)
        )


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reasons: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(pl: PLFunction, cert: Certificate) -> VerificationResult:
    """Re-derive a certificate's claims from scratch against the function."""
    pl = as_resolution_one(pl)
    reasons: list[str] = []
    if isinstance(cert, NotExtremeCertificate):
        for name, func in (("pi1", cert.pi1), ("pi2", cert.pi2)):
            if func.q != pl.q or func.n != 4:
                reasons.append(f"{name} does not live on the 4x grid of the input")
            elif func.f != pl.f:
                reasons.append(f"{name} has a different reference point f")
        if not reasons:
            if cert.pi1.values == cert.pi2.values:
                reasons.append("the two functions are identical")
            fine = refine(pl)
            size = fine.grid_size
            for i in range(size):
                row1 = cert.pi1.values[i]
                row2 = cert.pi2.values[i]
                rowf = fine.values[i]
                for j in range(size):
                    if row1[j] + row2[j] != 2 * rowf[j]:
                        reasons.append(
                            f"average differs from the input at grid point ({i},{j})"
                        )
                        break
                else:
                    continue
                break
            for name, func in (("pi1", cert.pi1), ("pi2", cert.pi2)):
                rep = check_minimality(func)
                if not rep.minimal:
                    v = rep.violations[0]
                    reasons.append(
                        f"{name} is not minimal ({v.kind} violation, slack {v.slack})"
                    )
        return VerificationResult(not reasons, tuple(reasons))

    if isinstance(cert, ExtremeCertificate):
        if cert.kernel_dimension != 0:
            reasons.append("extremality evidence must have kernel dimension 0")
        sys = assemble(pl, cert.resolution)
        ker = kernel(sys)
        if ker.variables != cert.variables:
            reasons.append(
                f"variable count mismatch: {ker.variables} != {cert.variables}"
            )
        if ker.rank != cert.rank:
            reasons.append(f"rank mismatch: {ker.rank} != {cert.rank}")
        if ker.dimension != cert.kernel_dimension:
            reasons.append(
                f"kernel dimension mismatch: {ker.dimension} != {cert.kernel_dimension}"
            )
        return VerificationResult(not reasons, tuple(reasons))

    return VerificationResult(False, ("unknown certificate type",))
