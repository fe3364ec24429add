import json

import pytest

import plancurate as pc


def test_version():
    assert pc.__version__ == "0.1.0"


def test_task_space_counts():
    assert [pc.count_states(n) for n in range(2, 7)] == [3, 13, 73, 501, 4051]
    assert pc.task_space(3) == 132
    assert pc.task_space(4) == 4968


def test_worked_examples_solve_optimally():
    for domain, length in (("blocksworld", 12), ("logistics", 8)):
        task, plan = pc.worked_example(domain)
        result = pc.solve(task)
        assert result["status"] == "solved"
        assert result["length"] == length
        verdict = pc.validate(task, pc.render_plan(plan, domain), optimal_length=length)
        assert verdict["valid"] and verdict["is_optimal"]


def test_generate_is_deterministic_and_json_round_trips():
    a = pc.generate(count=20, seed=5)
    b = pc.generate(count=20, seed=5)
    assert [t.id for t in a] == [t.id for t in b]
    record = a[0].to_json()
    assert json.loads(record)["domain"] == "blocksworld"
    assert pc.Task.from_json(record) == a[0]


def test_prompt_and_parse():
    task = pc.generate(domain="logistics", count=1, seed=2)[0]
    prompt = pc.render_prompt(task, one_shot=True)
    assert prompt.count("[STATEMENT]") == 2
    assert prompt.endswith("[PLAN]")
    plan = pc.solve(task)["plan"]
    assert pc.parse_plan(pc.render_plan(plan, "logistics"), "logistics") == plan
    with pytest.raises(ValueError, match="unknown-template"):
        pc.parse_plan("fly the truck to the moon", "logistics")


def test_invalid_responses_get_verdicts():
    task, plan = pc.worked_example("blocksworld")
    assert pc.validate(task, "")["verdict"] == "goal_not_satisfied"
    assert pc.validate(task, "[PLAN]\njump\n[PLAN END]")["verdict"] == "parse_error"
    swapped = plan[:6] + [plan[8], plan[7], plan[6]] + plan[9:]
    verdict = pc.validate(task, "\n".join(swapped))
    assert verdict["verdict"] == "precondition_violation"
    assert verdict["failed_step"] == 7


def test_selection():
    tasks = pc.generate(count=200, seed=1)
    sel = pc.select_cmds(tasks, k=10, seed=3)
    assert len(set(sel.ids)) == 10
    rnd = pc.select_random(tasks, k=10, seed=3)
    assert len(rnd.ids) == 10
    assert sel.as_dict()["diversity"] == sel.diversity
    assert pc.edit_distance(tasks[0], tasks[0]) == 0


def test_errors_are_translated():
    with pytest.raises(pc.PlancurateError):
        pc.generate(count=133, n_blocks=3)
