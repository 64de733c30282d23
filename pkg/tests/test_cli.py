import json

import numpy as np

from statecompat.cli import main
from statecompat.compat import full_report
from statecompat.density import validate_density
from statecompat.fileio import (
    Instance,
    dump_payload,
    instance_payload,
    pairs_to_vector,
    parse_instance,
)

E0 = np.array([1.0, 0.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)


def write_instance(path, matrices, dim=None, names=None):
    dim = dim or matrices[0].shape[0]
    names = names or [f"rho_{i + 1}" for i in range(len(matrices))]
    inst = Instance(dim=dim, names=names, matrices=[np.asarray(m, complex) for m in matrices])
    with open(path, "w") as fh:
        dump_payload(instance_payload(inst), fh)
    return path


def spin_pair():
    return [np.diag([1.0, 0.0]), np.outer(PLUS, PLUS.conj())]


# ------------------------------------------------------------------- check


def test_check_incompatible_spin_pair(tmp_path, capsys):
    path = write_instance(tmp_path / "spin.json", spin_pair())
    code = main(["check", "--input", str(path)])
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    assert payload["report"]["compatible"] is False
    assert payload["report"]["pairwise_product_nonzero"][0][1] is True
    assert payload["report"]["pairwise_commute"][0][1] is False


def test_check_compatible_with_witness(tmp_path):
    path = write_instance(
        tmp_path / "ok.json", [np.eye(2) / 2, np.outer(PLUS, PLUS.conj())]
    )
    out = tmp_path / "report.json"
    code = main(["check", "--input", str(path), "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    witness = pairs_to_vector(payload["report"]["witness"])
    assert abs(abs(np.vdot(witness, PLUS)) - 1.0) <= 1e-10


def test_check_diagnoses_bad_trace(tmp_path, capsys):
    path = write_instance(tmp_path / "bad.json", [np.diag([1.0, 1.0])])
    code = main(["check", "--input", str(path)])
    err = capsys.readouterr().err
    assert code == 2
    assert "TraceNotOne" in err
    assert "rho_1" in err


def test_check_reports_every_offending_matrix(tmp_path, capsys):
    path = write_instance(
        tmp_path / "bad2.json",
        [np.diag([1.0, 1.0]), np.diag([1.5, -0.5]), np.eye(2) / 2],
    )
    code = main(["check", "--input", str(path)])
    err = capsys.readouterr().err
    assert code == 2
    assert "rho_1: TraceNotOne" in err
    assert "rho_2: NotPositive" in err
    assert "rho_3" not in err


def test_check_missing_file(capsys):
    code = main(["check", "--input", "/nonexistent/instance.json"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_check_tolerance_flags_are_honored(tmp_path, capsys):
    # with a loose match tolerance the non-Hermitian defect is symmetrized away
    m = np.diag([0.6, 0.4]).astype(complex)
    m[0, 1] = 1e-5
    path = write_instance(tmp_path / "almost.json", [m])
    assert main(["check", "--input", str(path)]) == 2
    capsys.readouterr()
    assert main(["check", "--input", str(path), "--tol-match", "1e-3"]) == 0
    capsys.readouterr()


# ----------------------------------------------------------------- scenario


def test_scenario_compatible_pair(tmp_path):
    path = write_instance(
        tmp_path / "pair.json", [np.diag([0.75, 0.25]), np.outer(PLUS, PLUS.conj())]
    )
    out = tmp_path / "rep.json"
    code = main(["scenario", "--input", str(path), "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["scenario"]["success"] is True
    assert payload["scenario"]["joint_zero_outcome_probability"] > 0
    for observer in payload["scenario"]["observers"]:
        assert observer["recovery_distance"] <= 1e-8


def test_scenario_three_observers(tmp_path, capsys):
    code = main(
        ["generate", "--dim", "3", "--count", "3", "--seed", "5",
         "--mode", "compatible", "--output", str(tmp_path / "gen.json")]
    )
    assert code == 0
    code = main(["scenario", "--input", str(tmp_path / "gen.json")])
    capsys.readouterr()
    assert code == 0


def test_scenario_incompatible_exits_one(tmp_path, capsys):
    path = write_instance(tmp_path / "spin.json", spin_pair())
    code = main(["scenario", "--input", str(path)])
    captured = capsys.readouterr()
    assert code == 1
    assert "common" in captured.err
    payload = json.loads(captured.out)
    assert "scenario" not in payload
    assert payload["report"]["compatible"] is False


# ----------------------------------------------------------------- generate


def test_generate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["generate", "--dim", "4", "--count", "3", "--seed", "7", "--mode", "compatible"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_seeds_differ(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generate", "--dim", "3", "--seed", "1", "--output", str(a)]) == 0
    assert main(["generate", "--dim", "3", "--seed", "2", "--output", str(b)]) == 0
    assert a.read_bytes() != b.read_bytes()


def test_generate_compatible_checks_out(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    assert main(["generate", "--dim", "4", "--count", "3", "--seed", "11",
                 "--mode", "compatible", "--output", str(gen)]) == 0
    assert main(["check", "--input", str(gen)]) == 0
    capsys.readouterr()
    assert main(["scenario", "--input", str(gen)]) == 0
    capsys.readouterr()


def test_generate_incompatible_dim2(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    assert main(["generate", "--dim", "2", "--count", "2", "--seed", "3",
                 "--mode", "incompatible", "--output", str(gen)]) == 0
    assert main(["check", "--input", str(gen)]) == 1
    capsys.readouterr()


def test_generate_pairwise_only_pattern(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    assert main(["generate", "--dim", "3", "--count", "3", "--seed", "9",
                 "--mode", "pairwise-only", "--output", str(gen)]) == 0
    assert main(["check", "--input", str(gen)]) == 1
    capsys.readouterr()
    inst = parse_instance(json.loads(gen.read_text()))
    for i in range(3):
        for j in range(i + 1, 3):
            pair = tmp_path / f"pair{i}{j}.json"
            write_instance(pair, [inst.matrices[i], inst.matrices[j]])
            assert main(["check", "--input", str(pair)]) == 0
            capsys.readouterr()


def test_generate_rejects_bad_parameters(capsys):
    assert main(["generate", "--dim", "1"]) == 2
    assert main(["generate", "--dim", "3", "--count", "2", "--mode", "pairwise-only"]) == 2
    capsys.readouterr()


def test_generated_instances_keep_their_promises(tmp_path, capsys):
    """compatible -> check 0 and scenario 0; incompatible -> check 1."""
    for seed in range(4):
        for mode, dim, count in [("compatible", 3, 2), ("compatible", 4, 3),
                                 ("incompatible", 3, 2), ("incompatible", 4, 3)]:
            gen = tmp_path / f"{mode}-{dim}-{count}-{seed}.json"
            assert main(["generate", "--dim", str(dim), "--count", str(count),
                         "--seed", str(seed), "--mode", mode, "--output", str(gen)]) == 0
            expected = 0 if mode == "compatible" else 1
            assert main(["check", "--input", str(gen)]) == expected
            capsys.readouterr()
            if mode == "compatible":
                assert main(["scenario", "--input", str(gen)]) == 0
                capsys.readouterr()


# ------------------------------------------------------------- report reuse


def test_report_witness_round_trip(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    rep = tmp_path / "rep.json"
    assert main(["generate", "--dim", "4", "--count", "3", "--seed", "21",
                 "--mode", "compatible", "--output", str(gen)]) == 0
    assert main(["check", "--input", str(gen), "--output", str(rep)]) == 0
    capsys.readouterr()
    payload = json.loads(rep.read_text())
    witness = pairs_to_vector(payload["report"]["witness"])
    inst = parse_instance(payload["instance"])
    for matrix in inst.matrices:
        rho = validate_density(matrix)
        assert np.vdot(witness, rho.matrix @ witness).real > 0


def test_report_verdicts_rederivable_from_embedded_instance(tmp_path, capsys):
    for mode, seed in [("compatible", 2), ("incompatible", 4), ("pairwise-only", 6)]:
        gen = tmp_path / f"{mode}.json"
        rep = tmp_path / f"{mode}-rep.json"
        assert main(["generate", "--dim", "3", "--count", "3", "--seed", str(seed),
                     "--mode", mode, "--output", str(gen)]) == 0
        main(["check", "--input", str(gen), "--output", str(rep)])
        capsys.readouterr()
        payload = json.loads(rep.read_text())
        inst = parse_instance(payload["instance"])
        again = full_report([validate_density(m) for m in inst.matrices])
        assert again.compatible == payload["report"]["compatible"]
        assert again.intersection_dim == payload["report"]["intersection_dim"]
        assert (
            np.asarray(again.pairwise_commute).tolist()
            == payload["report"]["pairwise_commute"]
        )
