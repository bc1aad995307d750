"""``amen <command> --in <file> [options]``.

Exit codes: 0 completed with every audit passed, 2 schema error,
3 semantic or module error, 4 internal audit failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .commands import dumps, execute
from .errors import AmenError, SchemaError
from .instances import COMMANDS, parse_instance

_OPTION_FLAGS = ("radius", "patience", "max_radius", "cap", "size_cap", "seed", "count")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amen", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--in", dest="infile", type=Path, help="instance/request JSON file")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    for name in _OPTION_FLAGS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=int)
    return p


def _error_report(exc: AmenError) -> dict:
    doc = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}}
    if getattr(exc, "path", None):
        doc["error"]["path"] = exc.path
    return doc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc: dict = {}
        if args.infile is not None:
            doc = json.loads(args.infile.read_text())
        elif args.command != "scan":
            raise AmenError("--in is required for this command")
        if not isinstance(doc, dict):
            raise SchemaError("expected an object", "$")
        options = dict(doc.get("options") or {})
        for name in _OPTION_FLAGS:
            if getattr(args, name) is not None:
                options[name] = getattr(args, name)
        doc["options"] = options
        request = parse_instance(json.dumps(doc), args.command)
        text = dumps(execute(request))
    except AmenError as exc:
        sys.stderr.write(dumps(_error_report(exc)))
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(dumps({"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": 2}}))
        return 2
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
