"""Plot Command: one SVG per input CSV table."""

import logging
from pathlib import Path

from enorm.models import PlotConfig, ResultRecord
from enorm.services.plotting import plot_table
from enorm.services.storage import read_table, sanitize_stem

logger = logging.getLogger(__name__)


def cmd_plot(config: PlotConfig) -> ResultRecord:
    out_dir = Path(config.out)
    written = []
    for source in config.inputs:
        frame = read_table(source)
        target = out_dir / f"{sanitize_stem(Path(source).stem)}.svg"
        written.append(str(plot_table(frame, target, source)))
    return ResultRecord(command="plot", config=config.model_dump(), summary={"files": written})
