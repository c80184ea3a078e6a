"""
Progress bars, per-repeat statistics file and optional tensorboard scalars.
"""
from typing import Dict, List, Optional
import os

from tqdm import tqdm


class ExperimentLogger:

    def __init__(
        self,
        run_dir: str,
        stats_file: Optional[str] = 'stats.txt',
        record_tensorboard: bool = False,
        show_pbar: bool = True,
    ):
        """Constructor.

        Args:
            run_dir: The directory to log to.
            stats_file: Name of the CSV of headline statistics per repeat. If
                None no statistics file is written.
            record_tensorboard: Whether to also write the statistics as
                tensorboard scalars.
            show_pbar: Whether to show progress bars.
        """
        self.show_pbar = show_pbar
        self.stats_path = None if stats_file is None else os.path.join(run_dir, stats_file)
        if self.stats_path is not None:
            os.makedirs(run_dir, exist_ok=True)
        self._writer = None
        if record_tensorboard:
            from torch.utils.tensorboard import SummaryWriter
            self._writer = SummaryWriter(run_dir)
        self._columns: Optional[List[str]] = None
        self._bars: List[tqdm] = []

    def start(self, num_repeats: int):
        """Open the outer progress bar over num_repeats steps."""
        if self.show_pbar:
            self._bars = [tqdm(total=num_repeats, position=0)]

    def log_repeat(self, repeat: int, num_records: int, stats: Dict[str, float]):
        """Record the headline statistics of one finished repeat.

        The columns of the statistics file are fixed by the first call.

        Args:
            repeat: Index of the repeat.
            num_records: Number of records simulated so far.
            stats: Headline statistics of this repeat.
        """
        if self._columns is None:
            self._columns = list(stats)
            self._append_stats(['Repeat', 'Records'] + self._columns, mode='w')
        self._append_stats([str(repeat), str(num_records)]
                           + [f'{stats[k]:0.6f}' for k in self._columns])
        if self._writer is not None:
            for key, value in stats.items():
                self._writer.add_scalar(key, value, repeat)
            self._writer.add_scalar('Num Records', num_records, repeat)
        if self._bars:
            self._bars[0].update(1)
            self._bars[0].set_postfix_str(
                ', '.join(f'{k}: {v:0.3f}' for k, v in stats.items()))

    def _append_stats(self, fields: List[str], mode: str = 'a'):
        if self.stats_path is not None:
            with open(self.stats_path, mode) as sfile:
                sfile.write(','.join(fields) + '\n')

    def set_phase(self, phase: str):
        """Show what is happening on the innermost open bar."""
        if self._bars:
            self._bars[-1].set_description(phase)

    def start_inner_loop(self, desc: str, num_loops: int):
        """Open a bar nested under the outer one for num_loops steps."""
        if self.show_pbar:
            self._bars.append(tqdm(total=num_loops, position=len(self._bars), leave=False,
                                   desc=desc))

    def end_inner_loop(self):
        """Advance the nested bar, closing it after its last step."""
        if len(self._bars) > 1:
            inner = self._bars[-1]
            inner.update(1)
            if inner.n >= inner.total:
                inner.close()
                self._bars.pop()

    def end(self):
        """Close every bar and the tensorboard writer."""
        for bar in reversed(self._bars):
            bar.close()
        self._bars = []
        if self._writer is not None:
            self._writer.close()
