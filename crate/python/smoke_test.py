"""Smoke test for the msos Python extension.

Build first with `cargo build -p msos-py`; the script loads
target/{debug,release}/libmsos.so (or $MSOS_LIB) under the module name msos.
"""

import importlib.util
import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    candidates = [os.environ.get("MSOS_LIB")] + [
        ROOT / "target" / profile / "libmsos.so" for profile in ("debug", "release")
    ]
    for path in filter(None, candidates):
        if pathlib.Path(path).exists():
            spec = importlib.util.spec_from_file_location("msos", path)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("libmsos.so not found; run `cargo build -p msos-py` first")


def main():
    msos = load()

    skip_seq = msos.Language.from_file(ROOT / "languages" / "skip-seq.toml")
    assert skip_seq.entities == [("ρ", "read_only"), ("σ", "read_write")]
    summary = skip_seq.run("(seq (skip) (skip))", env={"x": 1})
    assert summary == {
        "outcome": "completed",
        "term": "skip",
        "steps": 1,
        "composed_label": {"ρ": {"x": 1}, "σ": {"pre": {}, "post": {}}},
    }, summary

    full = msos.Language.from_file(ROOT / "languages" / "full.toml")
    term = full.parse("(while (lit true) break)")
    assert term.sort == "Cmd" and term == full.parse(str(term))
    lines = full.trace(term)
    assert lines[-1]["outcome"] == "completed" and len(lines) == lines[-1]["steps"] + 1
    counter = (ROOT / "programs" / "counter.sexp").read_text()
    assert full.run(counter)["composed_label"]["out"] == [0, 1]
    handler = (ROOT / "programs" / "handler.sexp").read_text()
    assert full.run(handler, env={"y": "breaking"})["composed_label"]["out"] == [1, "breaking"]
    assert full.run("(emit (boundid nope))")["outcome"] == "stuck"

    report = skip_seq.check_determinism("Cmd", 5, "both")
    assert report["terms_checked"] == 677 and report["counterexamples"] == [], report

    fork = msos.Language.from_file(ROOT / "languages" / "fork.toml", with_fixtures=True)
    assert fork.check_determinism("Cmd", 2, "modular")["counterexamples"]
    try:
        fork.run("fork")
    except msos.MsosError as e:
        assert "nondeterministic" in str(e), e
    else:
        raise AssertionError("fork should be rejected")

    laws = msos.check_category_laws(2000, 7)
    assert all(l["failures"] == 0 for l in laws["laws"]), laws

    listing = "".join(msos.components())
    assert "Cmd.seq imports: Cmd.skip" in listing
    assert len(msos.components()) == 13

    try:
        msos.Language.from_toml('sorts = ["Cmd"]\n[components]\nCmd = ["Cmd.goto"]\n')
    except msos.MsosError as e:
        assert "unknown component" in str(e)
    else:
        raise AssertionError("unknown component accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
