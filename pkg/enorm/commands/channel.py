"""
Channel Commands

``channel`` tabulates the energy amplification Y_Φ(E) of a Kraus map against the
number operator; ``extension`` runs the Monte-Carlo sweep of the tensor-extension
inequality over seeded random operator pairs.
"""

import logging

import numpy as np
import pandas as pd

from enorm.commands.common import number_operator, output_paths, stopwatch
from enorm.errors import ValidationError
from enorm.models import ChannelConfig, ExtensionConfig, ResultRecord
from enorm.services.channel import build_channel, extension_sweep, y_curve
from enorm.services.linalg import random_complex_matrix, random_psd
from enorm.services.solver import OperatorPair
from enorm.services.storage import load_kraus_map, write_record, write_table

logger = logging.getLogger(__name__)


def cmd_channel(config: ChannelConfig) -> ResultRecord:
    with stopwatch() as elapsed:
        if config.kraus_file is not None:
            channel = load_kraus_map(config.kraus_file)
        else:
            channel = build_channel(config.channel or "identity", config.dim, config.seed, config.eta)
        report = y_curve(channel, number_operator(channel.dim), config.grid)
        rows = [{"E": e, "Y": y} for e, y in zip(report.energies, report.values, strict=True)]
        record = ResultRecord(
            command="channel",
            config=config.model_dump(),
            points=rows,
            summary={
                "kraus_ops": len(channel.kraus_ops),
                "dim": channel.dim,
                "concave_nondecreasing": not report.violations,
                "violations": list(report.violations),
                "max_ratio": report.max_ratio,
            },
            warnings=list(report.violations),
            wall_time=elapsed(),
        )
    json_path, csv_path = output_paths(config.out)
    write_table(csv_path, pd.DataFrame(rows))
    write_record(json_path, record)
    return record


def random_pairs(dim: int, count: int, seed: int) -> list[OperatorPair]:
    """Seeded random (A, G) pairs with λ_min(G) = 0."""
    pairs = []
    for child in np.random.SeedSequence(seed).spawn(count):
        rng = np.random.default_rng(child)
        pairs.append(OperatorPair(random_complex_matrix(dim, dim, rng), random_psd(dim, rng)))
    return pairs


def cmd_extension(config: ExtensionConfig) -> ResultRecord:
    with stopwatch() as elapsed:
        pairs = random_pairs(config.dim, config.pairs, config.seed)
        summary = extension_sweep(
            pairs,
            config.samples,
            k_dims=config.k_dim,
            energies=config.grid,
            eps_values=config.eps,
            seed=config.seed,
        )
        row = {"samples": summary.samples, "violations": summary.violations, "worst_margin": summary.worst_margin}
        record = ResultRecord(
            command="extension",
            config=config.model_dump(),
            points=[row],
            summary=row,
            wall_time=elapsed(),
        )
    json_path, csv_path = output_paths(config.out)
    write_table(csv_path, pd.DataFrame([row]))
    write_record(json_path, record)
    if summary.violations:
        raise ValidationError(f"{summary.violations} of {summary.samples} samples violate the extension inequality")
    return record
