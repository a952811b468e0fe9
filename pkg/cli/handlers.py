import argparse
import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from bounds import (
    Method,
    build_sos_feasibility,
    check_lift_cap,
    decompose_sos,
    jsr_bracket,
    lifting_size_table,
    run_bounds,
)
from lyapunov import (
    SosCertificate,
    certificate_from_json,
    certificate_to_json,
    certify,
    evaluation_violations,
    verify_certificate,
)
from sdp import export_sdpa
from symalg import enumerate_basis, induced_matrix, monomial_key
from utils.errors import CertificateError, InputFormatError
from utils.formatters import (
    format_bounds_table,
    format_bracket,
    format_matrix,
    format_polynomial,
    format_residuals,
    format_sizes_table,
)
from .inputs import load_input
from .report import RunReport


LOGGER = logging.getLogger(__name__)

METHOD_CHOICES = {
    "sos": [Method.SOS],
    "cq": [Method.CQ],
    "sr": [Method.SR],
    "lower": [Method.LOWER],
    "all": None,
}

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_CAP = 4


def cmd_bounds(args: argparse.Namespace) -> int:
    doc = load_input(args.input, args.format)
    mset = doc.matrix_set()
    LOGGER.info("bounds: method=%s degree=%s tol=%s", args.method, args.degree, args.tol)
    reports = run_bounds(
        mset,
        args.degree,
        METHOD_CHOICES[args.method],
        tol=args.tol,
        eps_feas=args.eps_feas,
        k_max=args.max_product_length,
        inflation=args.inflation,
    )
    run = RunReport(doc.digest, reports, input_name=doc.name)
    if args.json:
        print(run.to_json(include_timing=not args.no_timing), end="")
    else:
        print(format_bounds_table([r.to_dict() for r in reports], title=doc.name))
        print(format_bracket(*jsr_bracket(reports)))

    if args.certificate_out:
        sos = [r for r in reports if r.method is Method.SOS and isinstance(r.certificate, SosCertificate)]
        if sos:
            Path(args.certificate_out).write_text(certificate_to_json(sos[0].certificate, doc.name), encoding="utf-8")
            LOGGER.info("SOS certificate written to %s", args.certificate_out)
        else:
            LOGGER.warning("No SOS certificate was produced, %s not written", args.certificate_out)
    return EXIT_OK


def cmd_lift(args: argparse.Namespace) -> int:
    doc = load_input(args.input, args.format)
    mset = doc.matrix_set()
    if not 1 <= args.index <= mset.m:
        raise ValueError(f"--index must lie in 1..{mset.m}, got {args.index}")
    if args.degree < 1:
        raise ValueError(f"--degree must be >= 1, got {args.degree}")
    check_lift_cap(mset.n, args.degree)
    lifted = induced_matrix(mset.matrices[args.index - 1], args.degree)
    print(f"A{args.index}^[{args.degree}] ({lifted.shape[0]}x{lifted.shape[0]})")
    print(format_matrix(lifted, enumerate_basis(mset.n, args.degree).labels()))
    return EXIT_OK


def cmd_sizes(args: argparse.Namespace) -> int:
    if args.m < 1:
        raise ValueError(f"--m must be >= 1, got {args.m}")
    print(format_sizes_table(lifting_size_table(args.n, args.steps), args.m))
    return EXIT_OK


def cmd_export_sdpa(args: argparse.Namespace) -> int:
    doc = load_input(args.input, args.format)
    prog = build_sos_feasibility(doc.matrix_set(), args.degree, args.gamma, inflation=args.inflation)
    Path(args.output).write_text(export_sdpa(prog), encoding="utf-8")
    LOGGER.info("Wrote %s constraints, blocks %s to %s", prog.num_constraints, prog.block_sizes, args.output)
    return EXIT_OK


def _print_verdict(accepted: bool, residuals: List[dict], messages: List[str]) -> None:
    print(format_residuals(residuals))
    for message in messages:
        print(message)
    print("certificate accepted" if accepted else "certificate REJECTED")


def cmd_certify(args: argparse.Namespace) -> int:
    doc = load_input(args.input, args.format)
    mset = doc.matrix_set()
    try:
        cert = certificate_from_json(Path(args.poly).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputFormatError(f"cannot read {args.poly}: {exc}")
    if args.gamma is not None and not math.isclose(args.gamma, cert.gamma, rel_tol=1e-12):
        # Gram matrices belong to the stored gamma; search again at the new one
        cert = SosCertificate(args.gamma, cert.p)

    if cert.has_grams:
        report = verify_certificate(mset, cert, args.eps_feas)
        messages = list(report.messages)
        if report.ok:
            bad = evaluation_violations(mset, cert)
            if bad:
                messages.append(f"negative at {len(bad)} sample points")
        accepted = report.ok and not messages
        _print_verdict(accepted, [r.to_dict() for r in report.residuals], messages)
        return EXIT_OK if accepted else EXIT_REJECTED

    if cert.n != mset.n:
        _print_verdict(False, [], [f"certificate is for n={cert.n}, the matrices are {mset.n}x{mset.n}"])
        return EXIT_REJECTED
    try:
        found = certify(mset, cert.p, cert.gamma, eps_feas=args.eps_feas)
    except CertificateError as exc:
        _print_verdict(False, [r.to_dict() for r in exc.residuals], [str(exc)])
        return EXIT_NUMERICAL if exc.status == "numerical_failure" else EXIT_REJECTED
    _print_verdict(True, [r.to_dict() for r in found.residuals], [])
    return EXIT_OK


def _read_polynomial(path: str) -> Tuple[Dict[Tuple[int, ...], float], List[Tuple[int, ...]]]:
    """{"monomials": [[exponent, coeff], ...], "basis": [exponent, ...]?}"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        terms: Dict[Tuple[int, ...], float] = {}
        for alpha, value in data["monomials"]:
            key = tuple(int(a) for a in alpha)
            terms[key] = terms.get(key, 0.0) + float(value)
        basis: Optional[List[Tuple[int, ...]]] = None
        if "basis" in data:
            basis = [tuple(int(a) for a in alpha) for alpha in data["basis"]]
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed polynomial file {path}: {exc}")
    if not terms:
        raise InputFormatError("polynomial has no terms")
    if basis is None:
        degrees = {sum(alpha) for alpha in terms}
        n_vars = {len(alpha) for alpha in terms}
        if len(degrees) != 1 or len(n_vars) != 1 or next(iter(degrees)) % 2:
            raise InputFormatError("without an explicit 'basis' the polynomial must be homogeneous of even degree")
        basis = list(enumerate_basis(n_vars.pop(), degrees.pop() // 2).indices)
    return terms, basis


def cmd_decompose(args: argparse.Namespace) -> int:
    terms, basis = _read_polynomial(args.poly)
    try:
        decomp = decompose_sos(terms, basis, eps_feas=args.eps_feas)
    except CertificateError as exc:
        print(f"not SOS: {exc}")
        return EXIT_NUMERICAL if exc.status == "numerical_failure" else EXIT_REJECTED
    labels = [monomial_key(alpha) for alpha in decomp.monomials]
    print("Gram matrix:")
    print(format_matrix(decomp.gram, labels))
    print("Factor L (Q = L^T L):")
    print(format_matrix(decomp.factor))
    print("Squares:")
    for row in decomp.squares:
        inner = format_polynomial([(c, monomial_key(alpha)) for alpha, c in row.items()])
        print(f"  ({inner})^2")
    print(f"residual {decomp.max_constraint_residual:.3e}, min eigenvalue {decomp.min_eigenvalue:.3e}")
    return EXIT_OK
