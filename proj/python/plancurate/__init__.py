"""Planning task curation: generation, optimal labels, diversity selection."""

from ._core import (
    PlancurateError,
    Selection,
    Task,
    __version__,
    count_states,
    edit_distance,
    generate,
    graph_encoding,
    parse_plan,
    render_plan,
    render_prompt,
    select_cmds,
    select_random,
    solve,
    task_space,
    validate,
    worked_example,
)

__all__ = [
    "PlancurateError",
    "Selection",
    "Task",
    "__version__",
    "count_states",
    "edit_distance",
    "generate",
    "graph_encoding",
    "parse_plan",
    "render_plan",
    "render_prompt",
    "select_cmds",
    "select_random",
    "solve",
    "task_space",
    "validate",
    "worked_example",
]
