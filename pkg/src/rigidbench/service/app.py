"""FastAPI application exposing the workbench operations.

Every endpoint is stateless: parse the request, run the corresponding
core operation, serialize the result.  Domain errors map to HTTP 400
with a machine-readable code so thin clients can translate them into
exit statuses without scraping messages.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..certificates import (
    FULL_RANK_PARTITION,
    best_lower_bound,
    certificate_candidates,
    dft_decomposition_mismatch,
    refute_perturbation,
)
from ..errors import (
    CertificateFailedError,
    CertificateInapplicableError,
    CertificateMismatchError,
    FormatError,
    RefutationNotGuaranteedError,
    ResourceLimitError,
    RigidbenchError,
)
from ..formats import format_matrix, parse_matrix, parse_perturbation
from ..matrices import dft, sylvester
from ..rank import exact_rank, numerical_rank
from ..search import cross_validate
from .schemas import (
    BoundRequest,
    BoundResponse,
    GenRequest,
    GenResponse,
    HealthResponse,
    RankRequest,
    RankResponse,
    RefuteRequest,
    RefuteResponse,
    RigidityRequest,
    RigidityResponse,
    VerifyDftRequest,
    VerifyDftResponse,
)

USAGE = "usage"
PARSE = "parse"
NO_CERTIFICATE = "no_certificate"
REFUTATION_NOT_GUARANTEED = "refutation_not_guaranteed"

_ERROR_CODES = (
    (RefutationNotGuaranteedError, REFUTATION_NOT_GUARANTEED),
    (CertificateInapplicableError, NO_CERTIFICATE),
    (CertificateFailedError, NO_CERTIFICATE),
    (CertificateMismatchError, USAGE),
    (FormatError, PARSE),
    (ResourceLimitError, USAGE),
    (RigidbenchError, USAGE),
    (ValueError, USAGE),
    (TypeError, USAGE),
)


def _bool_token(flag: bool) -> str:
    return "true" if flag else "false"


def _handler_for(code: str):
    async def handler(request, exc):
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": code, "message": str(exc)}},
        )

    return handler


def create_app() -> FastAPI:
    app = FastAPI(title="rigidbench", version=__version__)
    for exc_type, code in _ERROR_CODES:
        app.add_exception_handler(exc_type, _handler_for(code))

    @app.get("/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/gen", response_model=GenResponse)
    async def gen(req: GenRequest) -> GenResponse:
        if req.family == "sylvester":
            if req.approximate:
                raise ValueError("sylvester matrices are always exact")
            matrix = sylvester(req.size_param)
        else:
            matrix = dft(req.size_param, approximate=req.approximate)
        return GenResponse(matrix=format_matrix(matrix))

    @app.post("/rank", response_model=RankResponse)
    async def rank(req: RankRequest) -> RankResponse:
        matrix = parse_matrix(req.matrix)
        numerical = req.numerical or getattr(matrix, "kind", "sign") == "approx"
        if numerical:
            value = numerical_rank(matrix, req.tolerance)
            mode = "numerical"
        else:
            value = exact_rank(matrix)
            mode = "exact"
        return RankResponse(rank=value, mode=mode, summary=f"RANK {value} {mode}")

    @app.post("/bound", response_model=BoundResponse)
    async def bound(req: BoundRequest) -> BoundResponse:
        matrix = parse_matrix(req.matrix)
        certificate = best_lower_bound(matrix, req.target_rank)
        summary = f"LOWER_BOUND {certificate.bound} via {certificate.kind}"
        return BoundResponse(summary=summary, certificate=certificate.to_json_dict())

    @app.post("/refute", response_model=RefuteResponse)
    async def refute(req: RefuteRequest) -> RefuteResponse:
        matrix = parse_matrix(req.matrix)
        perturbation = parse_perturbation(req.perturbation)
        certificate = next(
            (
                c
                for c in certificate_candidates(matrix, req.target_rank)
                if c.kind == FULL_RANK_PARTITION
            ),
            None,
        )
        if certificate is None:
            raise CertificateInapplicableError(
                "no full-rank partition certificate verifies for this matrix and rank"
            )
        witness = refute_perturbation(matrix, perturbation, req.target_rank, certificate)
        summary = (
            f"REFUTATION_WITNESS block=({witness.block_row},{witness.block_col}) "
            f"changes={witness.changes_in_block} floor={witness.claimed_rank_floor} "
            f"weight={witness.perturbation_weight} perturbed_rank={witness.perturbed_rank}"
        )
        return RefuteResponse(
            summary=summary,
            certificate=certificate.to_json_dict(),
            witness=witness.to_json_dict(),
        )

    @app.post("/rigidity", response_model=RigidityResponse)
    async def rigidity(req: RigidityRequest) -> RigidityResponse:
        matrix = parse_matrix(req.matrix)
        report = cross_validate(
            matrix,
            req.target_rank,
            budget=req.budget,
            seed=req.seed,
            tol=req.tolerance,
            exact=req.exact,
        )
        summary = (
            f"RIGIDITY_INTERVAL [{report.lower}, {report.upper}] "
            f"exact={_bool_token(report.exact)}"
        )
        return RigidityResponse(summary=summary, report=report.to_json_dict())

    @app.post("/verify-dft", response_model=VerifyDftResponse)
    async def verify_dft(req: VerifyDftRequest) -> VerifyDftResponse:
        mismatch = dft_decomposition_mismatch(req.n, req.exponent_offset)
        holds = mismatch is None
        summary = (
            f"DFT_DECOMPOSITION n={req.n} offset={req.exponent_offset} "
            f"holds={_bool_token(holds)}"
        )
        return VerifyDftResponse(holds=holds, mismatch=mismatch, summary=summary)

    return app
