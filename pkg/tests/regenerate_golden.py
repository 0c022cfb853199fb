"""Rewrite tests/golden from the current CLI output.  Run only after reviewing a diff."""

import io
import json
from pathlib import Path

from formalauto.cli import run

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "src" / "formalauto" / "fixtures"
GOLDEN = HERE / "golden"


def cases():
    for path in sorted(FIXTURES.glob("*.json")):
        name = path.stem
        data = json.loads(path.read_text())
        yield name, "analyze", ["analyze", str(path), "--no-timing"], "json"
        if "rhs" in data:
            yield name, "solve", ["solve", str(path), "--no-timing"], "json"
        yield name, "polygon", ["polygon", str(path), "--format", "svg"], "svg"


def render(argv):
    buf = io.StringIO()
    code = run(argv, stdout=buf)
    return code, buf.getvalue()


def main():
    GOLDEN.mkdir(exist_ok=True)
    codes = {}
    for name, cmd, argv, ext in cases():
        code, text = render(argv)
        (GOLDEN / f"{name}.{cmd}.{ext}").write_text(text)
        codes[f"{name}.{cmd}"] = code
    (GOLDEN / "exit_codes.json").write_text(json.dumps(codes, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
