"""
Command-line toolchain.

Exit codes: 0 success, 1 validation failure or domain error, 2 parse or
format error, 3 usage error.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Iterator, List, Optional

import click
import numpy as np
import typer
import yaml
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table
from rich.text import Text
from typer.core import TyperGroup

from app.config import get_settings
from app.core.errors import EXIT_USAGE, EXIT_VALIDATION, BRepError, ContractViolationError
from app.core.logging import configure_logging, log_with_extra
from app.corpus.corpus import gen_corpus
from app.evaluation.constraints import detect_constraints
from app.evaluation.metrics import evaluate_sets
from app.evaluation.validity import check_validity
from app.geometry.grids import Aabb
from app.geometry.transforms import jitter_domain_box
from app.pipeline import AUTO_META, detokenize, roundtrip_check, stream_stats, tokenize
from app.schema.document import SCHEMA_VERSION, BRepDocument, load_document, save_document
from app.topology.graph import extract_user_graph
from app.topology.references import WindowStride
from app.topology.traversal import FaceOrdering
from app.tokens.autocomplete import encode_autocomplete_prefix
from app.tokens.decoder import DecodeMode
from app.tokens.stream import read_stream, write_stream
from app.tokens.vocabulary import VOCAB_VERSION, Complexity, vocabulary_manifest

logger = logging.getLogger(__name__)

stdout = Console()
stderr = Console(stderr=True)


class MetaChoice(str, Enum):
    NONE = "none"
    AUTO = AUTO_META
    EASY = Complexity.EASY.value
    MEDIUM = Complexity.MEDIUM.value
    HARD = Complexity.HARD.value
    RANDOM = Complexity.RANDOM.value


class BRepCommandGroup(TyperGroup):
    """Reports command-line usage errors with their own exit code."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise


cli = typer.Typer(
    name="brep-tokenizer",
    cls=BRepCommandGroup,
    help="Tokenize B-Rep solids into discrete sequences and back.",
    add_completion=False,
    no_args_is_help=True,
)


def _version_callback(value: bool) -> None:
    if value:
        settings = get_settings()
        typer.echo(
            f"{settings.APP_NAME} {settings.APP_VERSION} "
            f"(schema {SCHEMA_VERSION}, vocabulary {VOCAB_VERSION})"
        )
        raise typer.Exit()


@cli.callback()
def main(
    version: bool = typer.Option(
        False, "--version", callback=_version_callback, is_eager=True, help="Print versions and exit."
    ),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override LOG_LEVEL."),
) -> None:
    settings = get_settings()
    configure_logging(
        service_name=settings.APP_NAME,
        log_level=settings.LOG_LEVEL if log_level is None else log_level,
        format_type=settings.LOG_FORMAT,
    )


@contextmanager
def reported_errors() -> Iterator[None]:
    """Turn toolchain errors into a one-line diagnostic and the mapped exit code."""
    try:
        yield
    except BRepError as exc:
        log_with_extra(logger, "debug", "command failed", error=exc.code, details=exc.details)
        stderr.print(Text(f"error[{exc.code}]: {exc.message}", style="bold red"))
        raise typer.Exit(exc.exit_code) from exc


def _emit(report: BaseModel, as_json: bool, title: str) -> None:
    if as_json:
        typer.echo(report.model_dump_json(indent=2))
        return
    table = Table(title=title, show_header=True)
    table.add_column("field")
    table.add_column("value")
    for key, value in report.model_dump().items():
        table.add_row(key, Text(str(value)))
    stdout.print(table)


def _default_stride() -> WindowStride:
    return WindowStride(get_settings().WINDOW_STRIDE)


def _default_ordering() -> FaceOrdering:
    return FaceOrdering(get_settings().FACE_ORDERING)


def _parse_ints(text: str, option: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma separated integers, got {text!r}", param_hint=option)


def _parse_box(text: str) -> Aabb:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise typer.BadParameter(f"expected six comma separated numbers, got {text!r}", param_hint="--domain-box")
    if len(values) != 6:
        raise typer.BadParameter("a domain box needs exactly six numbers", param_hint="--domain-box")
    return Aabb.from_array(values)


StrideOption = typer.Option(None, "--window-stride", help="Reference window stride (default WINDOW_STRIDE).")
OrderingOption = typer.Option(None, "--ordering", help="Face ordering, bft or coord (default FACE_ORDERING).")


@cli.command("tokenize")
def tokenize_command(
    document: Path = typer.Argument(..., help="BRepDocument JSON file."),
    output: Path = typer.Option(..., "-o", "--output", help="Token stream (.abtk binary, .txt text)."),
    meta: MetaChoice = typer.Option(MetaChoice.NONE, "--meta", help="Complexity meta block."),
    window_stride: Optional[WindowStride] = StrideOption,
    ordering: Optional[FaceOrdering] = OrderingOption,
    no_normalize: bool = typer.Option(False, "--no-normalize", help="Input is already in [-1, 1]^3."),
    allow_large: bool = typer.Option(False, "--allow-large", help="Lift the face and edge limits."),
) -> None:
    """Canonicalize, encode latents, traverse and serialize one solid."""
    with reported_errors():
        graph = load_document(document).to_graph()
        result = tokenize(
            graph,
            stride=window_stride or _default_stride(),
            meta=meta.value,
            normalize=not no_normalize,
            enforce_limits=not allow_large,
            ordering=_default_ordering() if ordering is None else ordering,
        )
        write_stream(output, result.stream)
    log_with_extra(logger, "info", "tokenized", path=str(output), tokens=len(result.stream),
                   faces=graph.num_faces, edges=graph.num_edges)
    typer.echo(f"{len(result.stream)} tokens, {graph.num_faces} faces, {graph.num_edges} edges -> {output}")


@cli.command("detokenize")
def detokenize_command(
    stream_path: Path = typer.Argument(..., help="Token stream file."),
    output: Path = typer.Option(..., "-o", "--output", help="BRepDocument JSON file to write."),
    mode: DecodeMode = typer.Option(DecodeMode.UNCONDITIONAL, "--mode"),
    window_stride: Optional[WindowStride] = StrideOption,
) -> None:
    """Parse a token stream and rebuild the solid."""
    with reported_errors():
        stream = read_stream(stream_path)
        result = detokenize(stream, mode=mode, stride=window_stride or _default_stride())
        save_document(BRepDocument.from_graph(result.graph), output)
    if result.unmatched:
        stderr.print(Text(f"warning: {len(result.unmatched)} edge(s) still unassigned", style="yellow"))
    typer.echo(f"{result.graph.num_faces} faces, {result.graph.num_edges} edges -> {output}")


@cli.command("roundtrip")
def roundtrip_command(
    document: Path = typer.Argument(...),
    meta: MetaChoice = typer.Option(MetaChoice.NONE, "--meta"),
    window_stride: Optional[WindowStride] = StrideOption,
    ordering: Optional[FaceOrdering] = OrderingOption,
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON."),
) -> None:
    """Tokenize then detokenize; fails unless topology and placement survive."""
    with reported_errors():
        graph = load_document(document).to_graph()
        report = roundtrip_check(
            graph,
            stride=window_stride or _default_stride(),
            meta=meta.value,
            ordering=_default_ordering() if ordering is None else ordering,
        )
    _emit(report, as_json, "round trip")
    if not report.ok:
        raise typer.Exit(EXIT_VALIDATION)


@cli.command("validate")
def validate_command(
    document: Path = typer.Argument(...),
    gap_tol: Optional[float] = typer.Option(None, "--gap-tol", min=0.0, help="Default GAP_TOLERANCE."),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Kernel-free watertightness check."""
    with reported_errors():
        graph = load_document(document).to_graph()
        report = check_validity(graph, get_settings().GAP_TOLERANCE if gap_tol is None else gap_tol)
    _emit(report, as_json, "validity")
    if not report.is_manifold_closed:
        raise typer.Exit(EXIT_VALIDATION)


@cli.command("detect-constraints")
def detect_constraints_command(
    document: Path = typer.Argument(...),
    axis_tol: Optional[float] = typer.Option(
        None, "--axis-tol", min=0.0, help="Degrees; default BOLT_AXIS_TOLERANCE_DEG."
    ),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Hull planes and bolt holes."""
    with reported_errors():
        graph = load_document(document).to_graph()
        report = detect_constraints(
            graph, get_settings().BOLT_AXIS_TOLERANCE_DEG if axis_tol is None else axis_tol
        )
    _emit(report, as_json, "constraints")


@cli.command("autocomplete-prefix")
def autocomplete_prefix_command(
    document: Path = typer.Argument(...),
    faces: str = typer.Option(..., "--faces", help="User face ids, e.g. 0,3,5."),
    output: Path = typer.Option(..., "-o", "--output"),
    domain_box: Optional[str] = typer.Option(
        None, "--domain-box", help="x0,y0,z0,x1,y1,z1; default the solid's bounding box."
    ),
    jitter_seed: Optional[int] = typer.Option(None, "--jitter-seed", help="Jitter the domain box by up to 15%."),
    meta: MetaChoice = typer.Option(MetaChoice.NONE, "--meta"),
    window_stride: Optional[WindowStride] = StrideOption,
) -> None:
    """Conditioning prefix for a set of user-supplied faces."""
    face_ids = _parse_ints(faces, "--faces")
    with reported_errors():
        graph = load_document(document).to_graph()
        box = _parse_box(domain_box) if domain_box else graph.bounding_box()
        if jitter_seed is not None:
            box = jitter_domain_box(box, np.random.default_rng(jitter_seed))
        user_graph = extract_user_graph(graph, face_ids)
        complexity = None
        if meta is MetaChoice.AUTO:
            raise ContractViolationError("--meta auto needs the full solid; pick a class")
        if meta is not MetaChoice.NONE:
            complexity = Complexity(meta.value)
        stream = encode_autocomplete_prefix(
            user_graph, box, stride=window_stride or _default_stride(), meta=complexity
        )
        write_stream(output, stream)
    typer.echo(
        f"{len(stream)} tokens, {user_graph.num_faces} user faces, "
        f"{len(user_graph.dangling_edges())} unassigned edges -> {output}"
    )


def _load_graphs(directory: Path, workers: int):
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise ContractViolationError(f"no documents found in {directory}", path=str(directory))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda path: load_document(path).to_graph(), paths))


@cli.command("metrics")
def metrics_command(
    gen: Path = typer.Option(..., "--gen", help="Directory of generated documents."),
    ref: Path = typer.Option(..., "--ref", help="Directory of reference documents."),
    train: Optional[Path] = typer.Option(None, "--train", help="Training set for Novel; default --ref."),
    seed: int = typer.Option(0, "--seed"),
    points: Optional[int] = typer.Option(None, "--points", min=1, help="Default METRIC_SAMPLE_POINTS."),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """COV, MMD, JSD, Novel, Unique and Valid of a generated set."""
    settings = get_settings()
    with reported_errors():
        workers = settings.WORKER_THREADS
        generated = _load_graphs(gen, workers)
        reference = _load_graphs(ref, workers)
        training = _load_graphs(train, workers) if train is not None else None
        report = evaluate_sets(
            generated,
            reference,
            train=training,
            n_points=settings.METRIC_SAMPLE_POINTS if points is None else points,
            resolution=settings.JSD_RESOLUTION,
            seed=seed,
            workers=workers,
            gap_tol=settings.GAP_TOLERANCE,
        )
    _emit(report, as_json, "metrics")


@cli.command("stats")
def stats_command(
    stream_path: Path = typer.Argument(...),
    window_stride: Optional[WindowStride] = StrideOption,
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Token counts by kind plus faces, edges, levels and complexity."""
    with reported_errors():
        report = stream_stats(read_stream(stream_path), stride=window_stride or _default_stride())
    _emit(report, as_json, "stream")


@cli.command("gen-corpus")
def gen_corpus_command(
    out: Path = typer.Option(..., "--out", help="Output directory."),
    count: int = typer.Option(..., "--count", min=1),
    seed: int = typer.Option(0, "--seed"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Default BREP_THREADS."),
) -> None:
    """Labelled synthetic corpus stratified across complexity classes."""
    with reported_errors():
        manifest = gen_corpus(out, count, seed=seed, workers=workers or get_settings().WORKER_THREADS)
    table = Table(title=f"corpus {out}")
    table.add_column("complexity")
    table.add_column("solids", justify="right")
    for complexity, group in manifest.groupby("complexity"):
        table.add_row(str(complexity), str(len(group)))
    stdout.print(table)


@cli.command("vocabulary")
def vocabulary_command(
    output: Optional[Path] = typer.Option(None, "-o", "--output", help="Write YAML here instead of stdout."),
) -> None:
    """Print the versioned vocabulary manifest as YAML."""
    text = yaml.safe_dump(vocabulary_manifest(), sort_keys=False)
    if output is None:
        typer.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")


def run() -> None:
    cli(prog_name="brep-tokenizer")
