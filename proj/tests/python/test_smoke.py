import json
import os
import subprocess
import xml.etree.ElementTree as ET

import pytest

import qzone


def two_var():
    return qzone.QuboModel(2, [1.0, 3.0], [(0, 1, -4.0)])


def test_evaluate_and_impacts():
    m = two_var()
    assert qzone.evaluate(m, [1, 1]) == 0.0
    assert qzone.evaluate(m, [0, 1]) == 3.0
    assert qzone.delta_flip(m, [0, 0], 0) == 1.0
    assert qzone.impact_vector(m, [1, 1]) == [3.0, 1.0]
    with pytest.raises(ValueError):
        qzone.evaluate(m, [1])


def test_matrix_round_trip():
    m = qzone.from_symmetric_matrix([[-1.0, 1.0], [1.0, -1.0]], 1.0)
    assert m.linear == [-1.0, -1.0]
    assert m.quadratic == [(0, 1, 2.0)]
    assert qzone.to_symmetric_matrix(m) == [[-1.0, 1.0], [1.0, -1.0]]


def test_solvers_agree_on_small_model():
    m = two_var()
    exact = qzone.solve_exact(m)
    assert exact.assignment == [0, 0] and exact.energy == 0.0
    assert qzone.solve_anneal(m, 100, 1).energy == 0.0
    assert qzone.solve_tabu(m, 100, 1).energy == 0.0
    assert qzone.solve_greedy(m, [0, 1]).energy == 0.0


def test_subproblem_matches_global_energy():
    m = two_var()
    sub = qzone.extract_subproblem(m, [0, 1], [0])
    assert sub.model.linear == [-3.0]
    assert sub.model.constant == 3.0
    assert qzone.merge_solution([0, 1], sub, [1]) == [1, 1]
    assert qzone.select_active_set(m, [1, 1], 1, "magnitude").indices == [0]


def test_instance_pipeline(tmp_path):
    inst = qzone.generate_instance(4, 4, 2, 5)
    assert inst.num_zones == 16 and len(inst.edges) == 24
    path = str(tmp_path / "inst.json")
    qzone.write_instance(inst, path)
    again = qzone.read_instance(path)
    assert again.attributes == inst.attributes
    model = qzone.build_qubo(inst)
    run = qzone.run_hybrid(model, q=16, subsolver="exact")
    assert run.objective == qzone.solve_exact(model).energy
    assert run.to_csv().startswith("iteration,objective_before")
    objectives = [r.objective_after for r in run.iterations]
    assert objectives == sorted(objectives, reverse=True)


def test_compare_report_is_json():
    model = qzone.build_qubo(qzone.generate_instance(3, 3, 2, 1))
    report = json.loads(qzone.compare_methods(model, [0, 1], budget=5000, q=4))
    medians = [row["median"] for row in report["rows"]]
    assert medians == sorted(medians)


def test_rendered_svg_is_well_formed():
    inst = qzone.generate_instance(8, 8, 3, 7)
    checker = [(i // 8 + i % 8) % 2 for i in range(64)]
    root = ET.fromstring(qzone.render_svg(inst, checker))
    cuts = [e for e in root.iter() if e.get("class") == "cut"]
    assert len(cuts) == 112 == qzone.count_cut_edges(inst, checker)


@pytest.mark.skipif(not os.environ.get("QZONE_CLI"), reason="command-line tool not built")
def test_cli_outputs_parse(tmp_path):
    cli = os.environ["QZONE_CLI"]
    inst = tmp_path / "i.json"
    subprocess.run([cli, "gen", "--rows", "4", "--cols", "4", "--seed", "2", "--out", str(inst)], check=True)
    prefix = tmp_path / "run"
    subprocess.run([cli, "solve", "--instance", str(inst), "--out-prefix", str(prefix)], check=True,
                   stdout=subprocess.DEVNULL)
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["termination_reason"] in {"converged", "patience", "max_iterations"}
    svg = tmp_path / "map.svg"
    subprocess.run([cli, "render", "--instance", str(inst), "--solution", str(tmp_path / "run.solution.json"),
                    "--out", str(svg)], check=True, stdout=subprocess.DEVNULL)
    ET.parse(svg)
    heat = tmp_path / "heat.svg"
    subprocess.run([cli, "impacts", "--instance", str(inst), "--heatmap", str(heat)], check=True,
                   stdout=subprocess.DEVNULL)
    ET.parse(heat)
    assert subprocess.run([cli, "solve"], capture_output=True).returncode == 1
