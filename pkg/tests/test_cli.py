import json
import subprocess
import sys

from divsub.cli import main
from divsub.embedder import embed
from divsub.generators import GenSpec, gen_minor, gen_target
from divsub.group import FiniteAbelianGroup
from divsub.minor import reduce
from divsub.serialize import (
    certificate_from_obj,
    certificate_to_obj,
    instance_from_obj,
    instance_to_obj,
    load_json,
    save_json,
    target_from_obj,
    target_to_obj,
    to_dot,
)

Z2 = FiniteAbelianGroup([2])


def run_cli(*argv):
    return main(list(argv))


def run_cli_proc(*argv):
    return subprocess.run(
        [sys.executable, "-m", "divsub.cli", *argv], capture_output=True, text=True
    )


# -- serialization round-trips ----------------------------------------------


def test_instance_roundtrip(tmp_path):
    G = gen_minor(GenSpec("blownup-clique", f=6, group=Z2, weight_mode="random", seed=2))
    path = tmp_path / "inst.json"
    save_json(path, instance_to_obj(G))
    loaded = instance_from_obj(load_json(path))
    assert loaded.group == G.group
    assert loaded.adjacency == G.adjacency
    assert {frozenset(v) for v in loaded.supernodes.values()} == {
        frozenset(v) for v in G.supernodes.values()
    }


def test_instance_serialization_is_byte_stable(tmp_path):
    spec = GenSpec("subdivided-clique", f=6, group=Z2, weight_mode="random", seed=9)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    save_json(a, instance_to_obj(gen_minor(spec)))
    save_json(b, instance_to_obj(gen_minor(spec)))
    assert a.read_bytes() == b.read_bytes()


def test_target_roundtrip():
    H = gen_target("petersen")
    again = target_from_obj(target_to_obj(H))
    assert again.edges == H.edges and again.n == H.n


def test_certificate_roundtrip(tmp_path):
    H = gen_target("P_2")
    G = gen_minor(GenSpec("subdivided-clique", f=58, group=Z2, weight_mode="unit", seed=0))
    sub = embed(G, H)
    obj = certificate_to_obj(sub)
    again = certificate_from_obj(obj)
    assert again.branch_map == sub.branch_map
    assert again.paths == sub.paths


def test_dot_export_colors_by_supernode():
    G = gen_minor(GenSpec("blownup-clique", f=5, group=Z2, weight_mode="zero", seed=1))
    dot = to_dot(G)
    assert dot.startswith("graph minor {")
    assert "fillcolor=" in dot and "cluster_0" in dot


# -- CLI behaviour ------------------------------------------------------------


def test_cli_sigma_z6(capsys):
    assert run_cli("sigma", "Z_6") == 0
    assert capsys.readouterr().out.strip() == "2"


def test_cli_sigma_klein(capsys):
    assert run_cli("sigma", "Z2^2") == 0
    assert capsys.readouterr().out.strip() == "4"


def test_cli_gen_reduce_embed_verify_roundtrip(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    cert = tmp_path / "cert.json"
    red = tmp_path / "reduced.json"
    lift = tmp_path / "lift.json"
    assert run_cli(
        "gen", "--shape", "subdivided-clique", "--f", "94", "--group", "Z_2",
        "--weights", "unit", "--seed", "5", "--out", str(inst),
    ) == 0
    assert run_cli("reduce", "--instance", str(inst), "--out", str(red),
                   "--liftmap", str(lift)) == 0
    assert run_cli("embed", "--instance", str(inst), "--h", "C_3",
                   "--out", str(cert)) == 0
    assert run_cli("verify", "--instance", str(inst), "--h", "C_3",
                   "--certificate", str(cert)) == 0
    out = capsys.readouterr().out
    assert "certificate accepted" in out
    reduced = instance_from_obj(load_json(red), reduced=True)
    assert reduced.num_supernodes == 94


def test_cli_verify_rejects_tampered_certificate(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    cert = tmp_path / "cert.json"
    run_cli("gen", "--f", "94", "--group", "Z_2", "--seed", "6", "--out", str(inst))
    run_cli("embed", "--instance", str(inst), "--h", "C_3", "--out", str(cert))
    obj = load_json(cert)
    obj["paths"][0]["vertices"] = obj["paths"][0]["vertices"][:-1]
    save_json(cert, obj)
    assert run_cli("verify", "--instance", str(inst), "--h", "C_3",
                   "--certificate", str(cert)) == 1
    assert "rejected" in capsys.readouterr().out


def test_cli_check_restricted(tmp_path, capsys):
    inst = tmp_path / "adv.json"
    run_cli("gen", "--shape", "adversarial-divisible", "--f", "10", "--group", "Z_2",
            "--seed", "3", "--out", str(inst))
    assert run_cli("check-restricted", "--instance", str(inst)) == 0
    unit = tmp_path / "unit.json"
    run_cli("gen", "--shape", "subdivided-clique", "--f", "10", "--group", "Z_2",
            "--weights", "unit", "--seed", "3", "--out", str(unit))
    capsys.readouterr()
    assert run_cli("check-restricted", "--instance", str(unit)) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["violation"] in (
        "cycle-weight-outside-subgroup", "edge-doubling-outside-subgroup"
    )


def test_cli_oracle_none_and_witness(tmp_path, capsys):
    k5 = tmp_path / "k5.json"
    k6 = tmp_path / "k6.json"
    run_cli("gen", "--f", "5", "--group", "Z_2", "--weights", "unit",
            "--min-len", "1", "--max-len", "1", "--seed", "0", "--out", str(k5))
    run_cli("gen", "--f", "6", "--group", "Z_2", "--weights", "unit",
            "--min-len", "1", "--max-len", "1", "--seed", "0", "--out", str(k6))
    capsys.readouterr()
    assert run_cli("oracle", "--instance", str(k5), "--h", "C_3") == 1
    assert json.loads(capsys.readouterr().out)["verdict"] == "none"
    assert run_cli("oracle", "--instance", str(k6), "--h", "C_3") == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "witness"


def test_cli_oracle_budget_exit_code(tmp_path, capsys):
    big = tmp_path / "big.json"
    run_cli("gen", "--f", "20", "--group", "Z_2", "--weights", "unit",
            "--min-len", "1", "--max-len", "1", "--seed", "0", "--out", str(big))
    capsys.readouterr()
    assert run_cli("oracle", "--instance", str(big), "--h", "C_3") == 3
    assert json.loads(capsys.readouterr().out)["verdict"] == "budget-exceeded"


def test_cli_malformed_json_is_usage_error(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text('{"group": "Z_2", "edges": [[0, 1')
    assert run_cli("embed", "--instance", str(broken), "--h", "C_3",
                   "--out", str(tmp_path / "c.json")) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_cli_bad_group_spec_is_usage_error(tmp_path):
    assert run_cli("gen", "--f", "5", "--group", "Q_7",
                   "--out", str(tmp_path / "x.json")) == 2


def test_cli_separate_process_verify(tmp_path):
    inst = tmp_path / "inst.json"
    cert = tmp_path / "cert.json"
    assert run_cli("gen", "--f", "58", "--group", "Z_2", "--seed", "1",
                   "--out", str(inst)) == 0
    assert run_cli("embed", "--instance", str(inst), "--h", "P_2",
                   "--out", str(cert)) == 0
    proc = run_cli_proc("verify", "--instance", str(inst), "--h", "P_2",
                        "--certificate", str(cert))
    assert proc.returncode == 0, proc.stderr
    assert "accepted" in proc.stdout


def test_cli_batch_writes_csv_and_figures(tmp_path, capsys):
    outdir = tmp_path / "report"
    code = run_cli(
        "batch", "--h", "P_2", "--f", "58", "--group", "Z_2", "--weights", "unit",
        "--seeds", "0:3", "--out-dir", str(outdir),
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "3/3 seeds embedded and verified" in out
    assert (outdir / "summary.csv").exists()
    assert (outdir / "path_lengths.png").exists()
    assert (outdir / "supernode_spend.png").exists()
    header = (outdir / "summary.csv").read_text().splitlines()[0]
    assert header.startswith("seed,f,vertices,result")


def test_cli_batch_parallel_matches_serial(tmp_path):
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    for out, workers in ((serial, "1"), (parallel, "2")):
        assert run_cli(
            "batch", "--h", "P_2", "--f", "58", "--group", "Z_2",
            "--seeds", "0:4", "--out-dir", str(out), "--no-figures",
            "--workers", workers,
        ) == 0

    def rows(p):
        lines = (p / "summary.csv").read_text().splitlines()
        return [",".join(line.split(",")[:9]) for line in lines]  # drop seconds

    assert rows(serial) == rows(parallel)


def test_cli_batch_deterministic_summary(tmp_path):
    outa = tmp_path / "a"
    outb = tmp_path / "b"
    for out in (outa, outb):
        assert run_cli(
            "batch", "--h", "P_2", "--f", "58", "--group", "Z_2",
            "--seeds", "0:2", "--out-dir", str(out), "--no-figures",
        ) == 0
    strip = lambda p: [
        ",".join(c for i, c in enumerate(line.split(",")) if i != 9)
        for line in (p / "summary.csv").read_text().splitlines()
    ]
    assert strip(outa) == strip(outb)  # identical apart from the seconds column
