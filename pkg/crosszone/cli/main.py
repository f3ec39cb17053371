"""Command-line interface for constructing, searching, verifying and simulating."""

import logging
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from crosszone.core.baselines import baseline_matrix, random_regular_matrix
from crosszone.core.config import DEFAULT_SEED, load_sim_config, parse_sim_values
from crosszone.core.czcp import (
    binary_perfect_czcp, canonicalize, certificate_document, construction1, construction2, czcs_check, czcs_from_czcp,
    czcs_width, golay_doubling, is_gcp
)
from crosszone.core.formats import format_sequence, parse_matrix_csv, parse_sequences
from crosszone.core.gbf import davis_jedwab_pair, parse_gbf, phase_sequence
from crosszone.core.known_pairs import EXAMPLE5_SEED, get_printed_pair
from crosszone.core.models import (
    BaselineKind, CommandSpec, ConstructKind, DJParams, MseReport, ReproduceTarget, SearchTask, SeedVariant,
    SequencePair, TrainingMatrix, TrainingParams
)
from crosszone.core.reproduce import Reproducer
from crosszone.core.search import naive_search, search_max_z
from crosszone.core.simulator import multipath_sweep, report_to_csv, run_sweep
from crosszone.core.store import ResultStore
from crosszone.core.training import (
    matrix_metadata, normalize_energy, seed_conditions, seed_psi, training_matrix_from_pair, verify_optimal
)

app = typer.Typer(help="Crosszone: cross Z-complementary pairs and sparse MIMO training matrices")
console = Console()
logger = logging.getLogger(__name__)

_state: Dict[str, Any] = {"out": None}


def setup_logging(verbose: bool = False) -> None:
    """Configure root logging for every subcommand.

    Args:
        verbose: Log at DEBUG instead of INFO
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory (default: $CROSSZONE_OUTPUT_DIR or ./results)"),
):
    """Construct, search and verify CZCPs; build and simulate training matrices."""
    load_dotenv()
    setup_logging(verbose)
    _state["out"] = out


def _store() -> ResultStore:
    return ResultStore(_state["out"])


def _command(subcommand: str, output: Optional[str] = None, **flags: Any) -> CommandSpec:
    return CommandSpec(subcommand=subcommand, flags=flags, output=output)


def _ints(text: Optional[str]) -> List[int]:
    if not text:
        return []
    return [int(v) for v in text.split(",") if v.strip()]


def _read_pair(path: Path) -> SequencePair:
    sequences = parse_sequences(path.read_text(encoding="utf-8"))
    if len(sequences) != 2:
        raise ValueError(f"{path} holds {len(sequences)} sequences, expected a pair")
    return SequencePair(a=sequences[0], b=sequences[1])


def _resolve_pair(pair_name: Optional[str], pair_file: Optional[Path]) -> SequencePair:
    if pair_file is not None:
        return _read_pair(pair_file)
    if pair_name is not None:
        return get_printed_pair(pair_name).pair
    raise ValueError("give a pair with --pair NAME or --pair-file PATH")


def _certificate_table(document: Dict[str, Any]) -> Table:
    table = Table(title=f"(N={document['n']}, Z={document['z']}) certificate")
    table.add_column("tau", justify="right")
    table.add_column("|AAC sum|^2", justify="right")
    table.add_column("|ACC sum|^2", justify="right")
    for tau, (aac, acc_sum) in enumerate(zip(document["aac_sum_profile"], document["acc_sum_profile"])):
        table.add_row(str(tau), f"{aac:g}", f"{acc_sum:g}")
    return table


def _print_report(report: MseReport, title: str) -> None:
    table = Table(title=title)
    for column in ("Matrix", "Paths", "EbNo (dB)", "MSE", "Minimum", "Gap (dB)", "Failures"):
        table.add_column(column)
    for r in report.records:
        table.add_row(
            r.matrix, str(r.paths), f"{r.ebno_db:g}", f"{r.mse_empirical:.4e}", f"{r.mse_min:.4e}",
            f"{r.gap_db:.3f}", str(r.failures),
        )
    console.print(table)


@app.command()
def construct(
    kind: ConstructKind = typer.Option(..., "--kind", "-k", help="Construction to run"),
    q: int = typer.Option(4, "--q", help="Alphabet order"),
    mu: int = typer.Option(4, "--mu", help="Number of Boolean variables"),
    pi: Optional[str] = typer.Option(None, "--pi", help="Permutation, e.g. 4,2,3,1"),
    w: Optional[str] = typer.Option(None, "--w", help="Linear weights w_1..w_mu"),
    w0: int = typer.Option(0, "--w0", help="Constant term"),
    w_prime: int = typer.Option(0, "--w-prime", help="Offset of the second sequence"),
    gbf: Optional[str] = typer.Option(None, "--gbf", help="GBF line: q=.. mu=.. quad=(i,j,c);.. lin=.. const=.."),
    seed_file: Optional[Path] = typer.Option(None, "--seed-file", help="GCP seed (two sequence lines)"),
    u1: int = typer.Option(0, "--u1", help="Scale exponent of the first sequence"),
    u2: int = typer.Option(0, "--u2", help="Scale exponent of the second sequence"),
    u: int = typer.Option(0, "--u", help="Extra exponent on the back halves"),
    variant: int = typer.Option(1, "--variant", help="Construction 1 variant (1..4)"),
    n: int = typer.Option(16, "--n", "-n", help="Length for --kind perfect"),
):
    """Build a sequence or a pair with one of the constructions."""
    store = _store()
    flags = dict(kind=kind, q=q, mu=mu, pi=pi, w=w, w0=w0, w_prime=w_prime, gbf=gbf,
                 seed_file=seed_file, u1=u1, u2=u2, u=u, variant=variant, n=n)
    try:
        if kind == ConstructKind.GBF:
            if not gbf:
                raise ValueError("--kind gbf needs --gbf")
            sequence = phase_sequence(parse_gbf(gbf))
            payload: Dict[str, Any] = {"sequence": format_sequence(sequence), "q": sequence.q, "n": sequence.n}
            path = store.save_document("construct_gbf.json", payload, _command("construct", "construct_gbf.json", **flags))
            console.print(Panel(format_sequence(sequence), title=f"GBF sequence (q={sequence.q}, N={sequence.n})"))
            console.print(f":white_check_mark: [bold green]Wrote {path}")
            return

        if kind in (ConstructKind.DJ, ConstructKind.CONSTRUCTION2):
            params = DJParams(
                q=q, mu=mu, pi=tuple(_ints(pi) or range(mu, 0, -1)), w=tuple(_ints(w) or [0] * mu),
                w0=w0, w_prime=w_prime,
            )
            pair = davis_jedwab_pair(params) if kind == ConstructKind.DJ else construction2(params)
        elif kind == ConstructKind.CONSTRUCTION1:
            seed = _read_pair(seed_file) if seed_file else EXAMPLE5_SEED
            pair = construction1(seed.a, seed.b, u1=u1, u2=u2, u=u, variant=variant)
        elif kind == ConstructKind.DOUBLING:
            seed = _read_pair(seed_file) if seed_file else SequencePair.binary("+", "+")
            pair = golay_doubling(seed)
        else:
            pair = binary_perfect_czcp(n)

        document = certificate_document(pair)
        document["gcp"] = is_gcp(pair)
        name = f"construct_{kind.value}"
        pair_path = store.save_pair(f"{name}.txt", pair)
        path = store.save_document(f"{name}.json", document, _command("construct", f"{name}.json", **flags))
        console.print(Panel(f"{document['a']}\n{document['b']}", title=f"{kind.value} pair"))
        console.print(_certificate_table(document))
        console.print(f":white_check_mark: [bold green]Wrote {path} and {pair_path}")
    except Exception as e:
        console.print(f":x: [bold red]Error constructing {kind.value}: {e}")
        raise typer.Exit(code=1)


@app.command()
def search(
    n: List[int] = typer.Option(..., "--n", "-n", help="Even length(s) to search"),
    target_z: Optional[int] = typer.Option(None, "--target-z", "-z", help="Largest zone width to try"),
    naive: bool = typer.Option(False, "--naive", help="Enumerate all 2^(2N) pairs (N <= 12)"),
    workers: int = typer.Option(1, "--workers", "-w", help="Worker processes"),
):
    """Find the maximal zone width of binary CZCPs of length N."""
    store = _store()
    table = Table(title="Maximal zone width")
    for column in ("N", "Z_max", "Solutions", "Explored", "Witness a", "Witness b", "Seconds"):
        table.add_column(column)
    for length in n:
        with console.status(f"[bold green]Searching N={length}..."):
            try:
                task = SearchTask(n=length, target_z=target_z, symmetry_reduction=not naive, worker_count=workers)
                result = search_max_z(task) if not naive else naive_search(length, start_z=target_z)
            except Exception as e:
                console.print(f":x: [bold red]Error searching N={length}: {e}")
                raise typer.Exit(code=1)
        command = _command("search", f"search_n{length}.json", n=length, target_z=target_z, naive=naive)
        store.save_search_result(result, command)
        witness = result.witnesses[0] if result.witnesses else None
        table.add_row(
            str(result.n), str(result.z_max), str(result.solutions), str(result.explored),
            format_sequence(witness.a) if witness else "-", format_sequence(witness.b) if witness else "-",
            f"{result.elapsed:.2f}",
        )
    console.print(table)


def _verify_matrix(path: Path, lam: Optional[int]) -> Dict[str, Any]:
    entries, metadata = parse_matrix_csv(path.read_text(encoding="utf-8"))
    params = None
    if metadata.get("j") and metadata.get("theta"):
        params = TrainingParams(n_t=entries.shape[0], j=metadata["j"], theta=metadata["theta"])
    omega = TrainingMatrix(entries=entries, label=metadata.get("label", path.stem), params=params)
    lam = lam if lam is not None else int(metadata.get("lambda", 0))
    report = verify_optimal(omega, lam)
    console.print(
        f"{path.name}: {omega.n_t} x {omega.length}, lambda={lam}: "
        + ("[bold green]optimal" if report.optimal else f"[bold red]{len(report.violations)} violations")
    )
    return {
        "file": path.name, "type": "matrix", "lambda": lam, "energy": report.energy, "passed": report.optimal,
        "violations": [v.model_dump() for v in report.violations],
    }


@app.command()
def verify(
    files: List[Path] = typer.Argument(..., help="Pair, set or matrix files"),
    expect_z: Optional[int] = typer.Option(None, "--expect-z", "-z", help="Required zone width for pair files"),
    lam: Optional[int] = typer.Option(None, "--lam", "-l", help="Channel delay for matrix files (default: from metadata)"),
):
    """Certify pairs, CZCS and training matrices read from files."""
    store = _store()
    reports = []
    try:
        for path in files:
            if path.suffix == ".csv":
                reports.append(_verify_matrix(path, lam))
                continue
            sequences = parse_sequences(path.read_text(encoding="utf-8"))
            if len(sequences) == 2:
                document = certificate_document(SequencePair(a=sequences[0], b=sequences[1]))
                passed = document["z"] == expect_z if expect_z is not None else document["z"] >= 1
                console.print(_certificate_table(document))
                reports.append({"file": path.name, "type": "pair", "passed": passed, **document})
            elif len(sequences) > 2:
                z = czcs_width(sequences)
                console.print(f"{path.name}: CZCS of {len(sequences)} sequences with Z={z}")
                reports.append({
                    "file": path.name, "type": "czcs", "m": len(sequences), "z": z,
                    "passed": z == expect_z if expect_z is not None else z >= 1,
                })
            else:
                raise ValueError(f"{path} holds a single sequence; a pair or a set is needed")
    except Exception as e:
        console.print(f":x: [bold red]Error verifying: {e}")
        raise typer.Exit(code=1)

    command = _command("verify", "verify.json", files=[p.name for p in files], expect_z=expect_z, lam=lam)
    store.save_document("verify.json", {"reports": reports}, command)
    if not all(r["passed"] for r in reports):
        console.print("[bold red]Verification failed")
        raise typer.Exit(code=1)
    console.print(":white_check_mark: [bold green]All files verified")


@app.command()
def czcs(
    pair: Optional[str] = typer.Option("table1-8", "--pair", "-p", help="Published pair name"),
    pair_file: Optional[Path] = typer.Option(None, "--pair-file", help="Pair file (overrides --pair)"),
    m: int = typer.Option(4, "--m", "-m", help="Number of set members (even)"),
):
    """Build a cross Z-complementary set from a CZCP."""
    store = _store()
    try:
        s = czcs_from_czcp(_resolve_pair(pair, pair_file), m)
        holds = czcs_check(s)
    except Exception as e:
        console.print(f":x: [bold red]Error building the set: {e}")
        raise typer.Exit(code=1)
    payload = {"m": s.m, "n": s.n, "z": s.z, "holds": holds, "members": [format_sequence(x) for x in s.members]}
    command = _command("czcs", "czcs.json", pair=pair, pair_file=pair_file, m=m)
    store.save_document("czcs.json", payload, command)
    console.print(Panel("\n".join(payload["members"]), title=f"({s.m}, {s.n}, {s.z})-CZCS"))
    if not holds:
        console.print("[bold red]Set conditions do not hold")
        raise typer.Exit(code=1)


@app.command("train-matrix")
def train_matrix(
    pair: Optional[str] = typer.Option("table1-8", "--pair", "-p", help="Published pair seeding the matrix"),
    pair_file: Optional[Path] = typer.Option(None, "--pair-file", help="Pair file (overrides --pair)"),
    variant: SeedVariant = typer.Option(SeedVariant.PSI1, "--variant", help="Seed characteristic matrix"),
    n_t: int = typer.Option(4, "--n-t", help="Transmit antennas (even)"),
    j: int = typer.Option(2, "--j", help="Sub-blocks per row (even)"),
    lam: Optional[int] = typer.Option(None, "--lam", "-l", help="Channel delay to verify (default: the zone width)"),
    baseline: Optional[BaselineKind] = typer.Option(None, "--baseline", "-b", help="Build a baseline instead"),
    energy: Optional[float] = typer.Option(None, "--energy", "-e", help="Rescale rows to this energy"),
    seed: int = typer.Option(DEFAULT_SEED, "--seed", help="Seed for random baselines"),
):
    """Build a training matrix, check X^H X = E I and export it."""
    store = _store()
    try:
        if baseline is not None:
            omega = baseline_matrix(baseline, n_t=n_t, energy=energy, rng=np.random.default_rng(seed))
            lam = 0 if lam is None else lam
            conditions = []
            seed_kind = baseline.value
        else:
            p = _resolve_pair(pair, pair_file)
            z = certificate_document(p)["z"]
            lam = z if lam is None else lam
            omega = training_matrix_from_pair(p, variant, n_t=n_t, j=j)
            if energy is not None:
                omega = normalize_energy(omega, energy)
            conditions = seed_conditions(seed_psi(canonicalize(p), variant), lam) if lam < p.n else []
            seed_kind = variant.value
        report = verify_optimal(omega, lam)
    except Exception as e:
        console.print(f":x: [bold red]Error building training matrix: {e}")
        raise typer.Exit(code=1)

    metadata = matrix_metadata(omega, lam, seed_kind)
    csv_path = store.save_matrix(f"matrix_{omega.label}.csv", omega, metadata)
    payload = {
        **metadata, "optimal": report.optimal, "violations": len(report.violations),
        "seed_conditions": [c.model_dump() for c in conditions],
    }
    command = _command("train-matrix", f"train_matrix_{omega.label}.json", pair=pair, pair_file=pair_file,
                       variant=variant, n_t=n_t, j=j, lam=lam, baseline=baseline, energy=energy, seed=seed)
    store.save_document(f"train_matrix_{omega.label}.json", payload, command)

    table = Table(title=f"{omega.label}: {omega.n_t} x {omega.length}, E={omega.energy:g}, lambda={lam}")
    table.add_column("Check")
    table.add_column("Holds")
    table.add_row("X^H X = E I", str(report.optimal))
    for c in conditions:
        table.add_row(c.name, str(c.holds) if c.holds else f"False at tau={c.failing_shifts}")
    console.print(table)
    console.print(f":white_check_mark: [bold green]Wrote {csv_path}")
    if baseline is None and not report.optimal:
        raise typer.Exit(code=1)


@app.command()
def simulate(
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="key=value simulation config file"),
    matrix: Optional[Path] = typer.Option(None, "--matrix", "-m", help="Training matrix CSV"),
    baseline: Optional[BaselineKind] = typer.Option(None, "--baseline", "-b", help="Baseline instead of a matrix file"),
    ebno: Optional[str] = typer.Option(None, "--ebno", help="Comma-separated EbNo grid in dB"),
    trials: Optional[int] = typer.Option(None, "--trials", "-t", help="Trials per point"),
    seed: Optional[int] = typer.Option(None, "--seed", help="RNG seed"),
    paths: Optional[int] = typer.Option(None, "--paths", help="Channel paths (lambda + 1)"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Worker processes"),
    multipath: Optional[int] = typer.Option(None, "--multipath", help="Sweep 1..K paths at the first EbNo point"),
):
    """Monte-Carlo LS channel estimation MSE for one training matrix."""
    store = _store()
    try:
        sim = load_sim_config(config) if config else parse_sim_values({})
        overrides = {"ebno_grid": ebno, "trials": trials, "rng_seed": seed, "paths": paths, "workers": workers}
        values = {k: str(v) for k, v in overrides.items() if v is not None}
        if values:
            sim = sim.model_copy(update=parse_sim_values(values).model_dump(include=set(values)))

        if matrix is not None:
            entries, metadata = parse_matrix_csv(matrix.read_text(encoding="utf-8"))
            source: Any = TrainingMatrix(entries=entries, label=metadata.get("label", matrix.stem))
        elif baseline == BaselineKind.RANDOM:
            source = partial(random_regular_matrix, 4, 32)
        elif baseline is not None:
            source = baseline_matrix(baseline, rng=np.random.default_rng(sim.rng_seed))
        else:
            raise ValueError("give --matrix or --baseline")
        label = source.label if isinstance(source, TrainingMatrix) else "random"

        with console.status(f"[bold green]Simulating {label}..."):
            if multipath:
                report = multipath_sweep(
                    {label: source}, sim, ebno_db=sim.ebno_grid[0], path_counts=range(1, multipath + 1), energy=None
                )
            else:
                report = run_sweep(source, sim, label=label)
    except Exception as e:
        console.print(f":x: [bold red]Error simulating: {e}")
        raise typer.Exit(code=1)

    csv_path = store.save_csv(f"mse_{label}.csv", report_to_csv(report))
    command = _command("simulate", f"mse_{label}.json", config=config, matrix=matrix, baseline=baseline,
                       multipath=multipath, sim=sim.model_dump(mode="json"))
    store.save_document(f"mse_{label}.json", report.model_dump(mode="json"), command)
    _print_report(report, f"LS channel estimation MSE: {label}")
    console.print(f":white_check_mark: [bold green]Wrote {csv_path}")


@app.command()
def reproduce(
    targets: List[ReproduceTarget] = typer.Argument(..., help="Targets to reproduce"),
    trials: int = typer.Option(10_000, "--trials", "-t", help="Trials per point for the MSE targets"),
    workers: int = typer.Option(1, "--workers", "-w", help="Worker processes"),
    seed: int = typer.Option(DEFAULT_SEED, "--seed", help="RNG seed"),
    format: str = typer.Option("text", "--format", "-f", help="Output format: text, table, csv or json"),
    only_surprises: bool = typer.Option(False, "--only-surprises", "-s", help="Show only failed checks"),
):
    """Re-derive published results and report any discrepancy."""
    store = _store()
    reproducer = Reproducer(store, trials=trials, workers=workers, seed=seed)
    results = []
    for target in targets:
        with console.status(f"[bold green]Reproducing {target.value}..."):
            try:
                result = reproducer.run(target)
            except Exception as e:
                console.print(f":x: [bold red]Error reproducing {target.value}: {e}")
                raise typer.Exit(code=1)
        command = _command("reproduce", f"reproduce_{target.value}.json", target=target, trials=trials, seed=seed)
        store.save_document(f"reproduce_{target.value}.json", result.model_dump(mode="json"), command)
        results.append(result)

    console.print(reproducer.format_results(results, only_surprises=only_surprises, format=format), markup=False)
    if reproducer.check_for_surprises(results):
        failed = [c.name for r in results for c in r.surprises]
        console.print(f"[bold red]{len(failed)} check(s) failed: {', '.join(failed)}")
        raise typer.Exit(code=1)
    console.print(":white_check_mark: [bold green]All checks passed")


if __name__ == "__main__":
    app()
