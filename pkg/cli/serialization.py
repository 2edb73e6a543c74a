"""Edge-list networks and CSV results."""

from pathlib import Path
from typing import Dict, List, Optional, Union
import logging
import sys

import pandas as pd

from core.analytics import AnalyticCurve
from core.dynamics import DiffusionTrace
from core.errors import NetworkFormatError, ResultsIOError
from core.network import MultiplexNetwork
from experiments.base import SweepResult
from experiments.sweeps import SeedSweepReport


logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

TRACE_COLUMNS = ["step", "adopters", "fraction"]
CURVE_COLUMNS = ["m", "q_m", "bound_m"]
SWEEP_COLUMNS = [
    "param", "value", "mean_final_fraction", "std_final_fraction",
    "samples", "mean_steps", "complete_cascades", "phase",
]
COMPANION_COLUMNS = ["q0", "alpha", "bound_final", "recurrence_final", "mean_final_fraction"]

PathLike = Union[str, Path]


def format_network(net: MultiplexNetwork) -> str:
    """Header ``n l`` then one ``i u v`` line per undirected edge with ``u < v``."""
    lines = [f"{net.n} {net.l}"]
    lines.extend(f"{i} {u} {v}" for i, u, v in net.edges())
    return "\n".join(lines) + "\n"


def _ints(line: str, count: int, line_number: int) -> List[int]:
    fields = line.split()
    if len(fields) != count:
        raise NetworkFormatError(f"expected {count} integers, got {len(fields)} field(s)", line_number)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise NetworkFormatError(f"non-integer field in {line.strip()!r}", line_number) from None


def parse_network(text: str) -> MultiplexNetwork:
    """Parse edge-list text; blank lines are ignored."""
    numbered = [(no, line) for no, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not numbered:
        raise NetworkFormatError("missing 'n l' header", 1)

    header_no, header = numbered[0]
    n, l = _ints(header, 2, header_no)
    if n < 1 or l < 1:
        raise NetworkFormatError(f"header needs n >= 1 and l >= 1, got n={n}, l={l}", header_no)

    edges = []
    for no, line in numbered[1:]:
        i, u, v = _ints(line, 3, no)
        if not 0 <= i < l:
            raise NetworkFormatError(f"layer {i} not in 0..{l - 1}", no)
        if not (0 <= u < n and 0 <= v < n):
            raise NetworkFormatError(f"node index outside 0..{n - 1} in edge ({u}, {v})", no)
        if u == v:
            raise NetworkFormatError(f"self-loop on node {u}", no)
        if u > v:
            raise NetworkFormatError(f"edge ({u}, {v}) must be listed with u < v", no)
        edges.append((i, u, v))

    net = MultiplexNetwork.from_edges(n, l, edges)
    report = net.validate()
    if not report.is_valid:
        raise NetworkFormatError("invalid network: " + "; ".join(report.issues()))
    return net


def _write_text(text: str, path: Optional[PathLike]) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        raise ResultsIOError(path, e.strerror or str(e)) from e
    logger.info(f"Wrote {len(text)} bytes to {path}")


def save_network(net: MultiplexNetwork, path: Optional[PathLike]) -> None:
    _write_text(format_network(net), path)


def load_network(path: PathLike) -> MultiplexNetwork:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise NetworkFormatError(f"cannot read '{path}': {e.strerror or e}") from e
    net = parse_network(text)
    logger.info(f"Loaded {net!r} from {path}")
    return net


def trace_frame(trace: DiffusionTrace) -> pd.DataFrame:
    return pd.DataFrame({
        "step": range(len(trace.adopters_per_step)),
        "adopters": list(trace.adopters_per_step),
        "fraction": list(trace.fractions()),
    }, columns=TRACE_COLUMNS)


def curve_frame(curve: AnalyticCurve) -> pd.DataFrame:
    return pd.DataFrame(curve.rows(), columns=CURVE_COLUMNS)


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    rows = [
        (result.parameter.value, pt.value, pt.mean_final_fraction, pt.std_final_fraction,
         pt.samples, pt.mean_steps, pt.complete_cascades, pt.phase.value if pt.phase else "")
        for pt in result.points
    ]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def compare_frame(results: Dict[str, SweepResult]) -> pd.DataFrame:
    """Sweep tables stacked in rule order, prefixed by a ``rule`` column."""
    blocks = []
    for rule, result in results.items():
        block = sweep_frame(result)
        block.insert(0, "rule", rule)
        blocks.append(block)
    return pd.concat(blocks, ignore_index=True)


def companion_frame(report: SeedSweepReport) -> pd.DataFrame:
    rows = [(c.q0, c.alpha, c.bound_final, c.recurrence_final, c.mean_final_fraction) for c in report.companions]
    return pd.DataFrame(rows, columns=COMPANION_COLUMNS)


def render_csv(frame: pd.DataFrame, comment: Optional[str] = None) -> str:
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if comment is not None:
        text += f"# {comment}\n"
    return text


def to_csv_text(result) -> str:
    """CSV text of a trace, analytic curve, sweep result or rule comparison."""
    if isinstance(result, DiffusionTrace):
        return render_csv(trace_frame(result), f"terminal={result.terminal_status.value}")
    if isinstance(result, AnalyticCurve):
        return render_csv(curve_frame(result))
    if isinstance(result, SeedSweepReport):
        return render_csv(sweep_frame(result.result))
    if isinstance(result, SweepResult):
        return render_csv(sweep_frame(result))
    if isinstance(result, dict):
        return render_csv(compare_frame(result))
    raise TypeError(f"cannot emit results of type {type(result).__name__}")


def emit_results(result, path: Optional[PathLike] = None) -> str:
    """Write ``result`` as CSV to ``path`` (stdout when ``None``) and return the text."""
    text = to_csv_text(result)
    _write_text(text, path)
    return text


def emit_companion(report: SeedSweepReport, path: Optional[PathLike]) -> str:
    text = render_csv(companion_frame(report))
    _write_text(text, path)
    return text
