"""End-to-end checks of the quadmod command line: exit codes, output, schema, determinism."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

QUADMOD, ROOT = sys.argv[1], sys.argv[2]
SCHEMA = json.load(open(os.path.join(ROOT, "docs", "report.schema.json")))
DATA = os.path.join(ROOT, "tests", "data")
failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    p = subprocess.run([QUADMOD, *args], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def expect(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)
        if detail:
            print(detail[-2000:])


def report(args):
    code, out, err = run(*args, "--format", "json")
    try:
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
    except (ValueError, jsonschema.ValidationError) as e:
        expect("schema " + " ".join(args), False, str(e) + err)
        return code, None
    return code, doc


code, out, _ = run("ktheory", "--builtin", "mn:2,4")
expect("ktheory mn:2,4 prints the groups", code == 0 and "K0 = Z/15, K1 = 0" in out, out)

code, out, _ = run("validate", "--builtin", "perm:3,(12),(23)")
expect("noncommuting permutations fail validation", code == 1 and "FAIL  left_actions.agree_on_A" in out, out)

code, _, err = run("validate", "--builtin", "mn:1,3")
expect("mn:1,3 is an input error", code == 2 and "InvalidParameter" in err, err)

code, doc = report(["validate", "--input", os.path.join(DATA, "h22.json")])
expect("file input validates", code == 0 and doc and doc["summary"]["pass"])

with tempfile.TemporaryDirectory() as tmp:
    bad = json.load(open(os.path.join(DATA, "h22.json")))
    bad["schema_version"] = "quadmod-spec-v2"
    path = os.path.join(tmp, "bad.json")
    json.dump(bad, open(path, "w"))
    code, _, err = run("validate", "--input", path)
    expect("schema version mismatch is an input error", code == 2 and "SchemaVersionMismatch" in err, err)

    open(path, "w").write("{\n \"dimH\": 4,\n")
    code, _, err = run("validate", "--input", path)
    expect("malformed JSON reports a position", code == 2 and "bad.json:3:" in err, err)

    outs = []
    for k in range(2):
        target = os.path.join(tmp, f"r{k}.json")
        code, _, _ = run("full", "--builtin", "mn:2,2", "--format", "json", "--output", target)
        outs.append(open(target, "rb").read())
    expect("reports are byte-identical across runs", code == 0 and outs[0] == outs[1])
    doc = json.loads(outs[0])
    jsonschema.validate(doc, SCHEMA)
    names = [s["name"] for s in doc["sections"]]
    expect("full runs every stage", names == ["validate", "fock", "relations", "ck", "ktheory"], str(names))
    expect("every entry carries a citation",
           all(c["citation"] for s in doc["sections"] for c in s["checks"]))

code, _, err = run("fock", "--builtin", "mn:2,2", "--depth", "3", env={"QUADMOD_MAX_DIM": "50"})
expect("explicit depth over budget gives TooLarge", code == 2 and "TooLarge" in err, err)

code, out, _ = run("fock", "--builtin", "mn:2,2", env={"QUADMOD_MAX_DIM": "50"})
expect("default depth falls back to 2 under a tight budget", code == 0 and "depth 2" in out, out)

code, _, err = run("fock", "--builtin", "mn:2,2", env={"QUADMOD_MAX_DIM": "10"})
expect("budget below depth 2 gives TooLarge", code == 2 and "TooLarge" in err, err)

code, _, err = run("fock", "--builtin", "mn:2,2", env={"QUADMOD_MAX_DIM": "lots"})
expect("garbage budget is an input error", code == 2, err)

code, _, err = run("fock", "--builtin", "mn:2,2", "--depth", "1")
expect("depth 1 is an input error", code == 2 and "DepthTooSmall" in err, err)

code, _, _ = run()
expect("missing subcommand is a usage error", code == 2)

code, _, _ = run("ktheory", "--builtin", "mn:2,2", "--input", os.path.join(DATA, "h22.json"))
expect("--builtin and --input exclude each other", code == 2)

code, doc = report(["full", "--builtin", "perm:3,(123),(132)"])
ids = {c["id"]: c for s in (doc or {}).get("sections", []) for c in s["checks"]}
expect("example 1 passes end to end", code == 0 and doc and doc["summary"]["pass"])
expect("alpha/beta finding is informational",
       ids.get("prop71.U_beta", {}).get("informational") is True and ids["prop71.U_beta"]["pass"]
       and not ids["prop71.U_alpha"]["pass"])

code, doc = report(["ck", "--builtin", "mn:2,3"])
expect("ck mn:2,3 passes", code == 0 and doc and doc["summary"]["pass"])

sys.exit(1 if failures else 0)
