"""Shared fixtures: corpus loading and an in-process CLI runner."""

import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from redarg import Trs, parse_trs
from redarg.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load_corpus(relpath: str) -> Trs:
    """Parse a corpus file; plain function so module-level strategies
    and parametrization can use it too."""
    return parse_trs((CORPUS / relpath).read_text())


def corpus_path(relpath: str) -> str:
    return str(CORPUS / relpath)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def applast() -> Trs:
    return load_corpus("applast.trs")


@pytest.fixture(scope="session")
def bogus() -> Trs:
    return load_corpus("bogus.trs")


@pytest.fixture(scope="session")
def plus_minus() -> Trs:
    return load_corpus("plus_minus.trs")


@pytest.fixture(scope="session")
def collapse() -> Trs:
    return load_corpus("negative/collapse.trs")


@pytest.fixture(scope="session")
def nonconfluent() -> Trs:
    return load_corpus("negative/nonconfluent.trs")


@pytest.fixture(scope="session")
def partial() -> Trs:
    return load_corpus("negative/partial.trs")


@pytest.fixture(scope="session")
def noncs() -> Trs:
    return load_corpus("negative/noncs.trs")


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Invoke the CLI in-process; returns (exit code, stdout, stderr).

    argparse failures exit via SystemExit; those are folded into the
    return code so tests can assert on them uniformly.
    """
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cli():
    return run_cli
