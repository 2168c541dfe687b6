"""Margin-based Elo leaderboards for text classifiers, with Meta-Elo aggregation."""

from ._core import (
    MetaEloError,
    archive_ratings,
    cli_main,
    classification_metrics,
    default_language_weights,
    expected_score,
    match_outcome,
    meta_elo,
    normalize_label,
    run_round_robin,
    stratified_split,
    update_pair,
    verify_archive,
    weight_components,
)

__all__ = [
    "MetaEloError",
    "archive_ratings",
    "cli_main",
    "run_cycle",
    "classification_metrics",
    "default_language_weights",
    "expected_score",
    "match_outcome",
    "meta_elo",
    "normalize_label",
    "run_round_robin",
    "stratified_split",
    "update_pair",
    "verify_archive",
    "weight_components",
]


def run_cycle(archive, gold, predictions, **options):
    """Runs one leaderboard cycle and returns the archive's current ratings.

    Keyword options mirror the ``run-cycle`` flags: ``language="en"``,
    ``k_factor=40``, ``update_mode="sequential"``, ``new_test_set=True``, ...
    """
    args = ["run-cycle", str(archive), str(gold), *map(str, predictions), "--format", "lines"]
    for key, value in options.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            args.append(flag)
        elif value not in (None, False):
            args += [flag, str(value)]
    code, _, err = cli_main(args)
    if code != 0:
        message = err.strip()
        raise MetaEloError(message[len("error: "):] if message.startswith("error: ") else message)
    return archive_ratings(str(archive))
