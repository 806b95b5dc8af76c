import csv
import json
import logging
import os
from typing import Dict, Iterable, List, Sequence

from checks.base import ReportRecord
from convergence import ConvergenceRow
from polarizations_real import write_fiber_table

logger = logging.getLogger(__name__)

REPORT_FILE = 'report.json'
TIMINGS_FILE = 'timings.json'
FIBERS_FILE = 'fibers.csv'
CONVERGENCE_FILE = 'convergence.csv'
PLOTS_DIR = 'plots'


def sorted_records(records: Iterable[ReportRecord]) -> List[ReportRecord]:
    return sorted(records, key=lambda r: r.sort_key())


class ReportWriter:
    """Writes the report file set of a scenario run"""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir

    def _path(self, *parts: str) -> str:
        path = os.path.join(self.out_dir, *parts)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        return path

    def format_record(self, record: ReportRecord) -> str:
        """One progress line per record"""
        tag = '[OK]' if record.passed else '[FAIL]'
        params = ', '.join(f"{k}={v}" for k, v in sorted(record.params.items()))
        line = f"{tag} {record.check_id} ({params}): abs_err={record.abs_err:.3e} rel_err={record.rel_err:.3e}"
        if record.order is not None:
            line += f" order={record.order if isinstance(record.order, str) else format(record.order, '.3f')}"
        if not record.passed and record.diagnostics:
            line += f"\n       {record.diagnostics}"
        return line

    def write_report(self, records: Sequence[ReportRecord], scenario: str, seed: int) -> str:
        """report.json: records sorted by check id and parameters, no timing, stable formatting"""
        document = {
            'scenario': scenario,
            'seed': seed,
            'passed': all(r.passed for r in records) and bool(records),
            'records': [r.to_dict() for r in sorted_records(records)],
        }
        path = self._path(REPORT_FILE)
        with open(path, 'w') as handle:
            json.dump(document, handle, indent=2, sort_keys=True)
            handle.write('\n')
        logger.info(f"Wrote {len(records)} records to {path}")
        return path

    def write_timings(self, timings: Dict[str, float]) -> str:
        path = self._path(TIMINGS_FILE)
        with open(path, 'w') as handle:
            json.dump({k: round(v, 6) for k, v in sorted(timings.items())}, handle, indent=2)
            handle.write('\n')
        return path

    def write_fibers(self, enumerations: Sequence) -> str:
        path = self._path(FIBERS_FILE)
        write_fiber_table(path, list(enumerations))
        return path

    def write_plot(self, name: str, rows: Sequence[Sequence[float]]) -> str:
        """Plain two-column text, one point per line"""
        path = self._path(PLOTS_DIR, f"{name}.dat")
        with open(path, 'w') as handle:
            handle.write(f"# {name}\n")
            for x, y in rows:
                handle.write(f"{float(x)!r} {float(y)!r}\n")
        return path

    def write_convergence(self, rows: Sequence[ConvergenceRow]) -> str:
        path = self._path(CONVERGENCE_FILE)
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(['check', 'params', 'N', 'error', 'order', 'flagged'])
            for row in rows:
                order = row.order if isinstance(row.order, str) else repr(row.order)
                for n, err in zip(row.n_values, row.errors):
                    writer.writerow([row.check_id, row.label, n, repr(err), order, int(row.flagged)])
        for i, row in enumerate(rows):
            self.write_plot(f"convergence_{row.check_id}_{i}", list(zip(row.n_values, row.errors)))
        logger.info(f"Wrote {len(rows)} convergence fits to {path}")
        return path

    @staticmethod
    def load_records(path: str) -> List[ReportRecord]:
        with open(path) as handle:
            document = json.load(handle)
        return [ReportRecord.from_dict(r) for r in document.get('records', [])]
