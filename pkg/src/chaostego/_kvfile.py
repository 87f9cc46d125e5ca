"""Line-based ``name=value`` text files used for keys and manifests."""

from pathlib import Path

from chaostego.errors import KeyFormatError


def parse_kv(text, allowed):
    """Parse ``name=value`` lines, rejecting unknown or repeated names.

    ``#`` starts a comment anywhere on a line; blank lines are skipped.
    Values are returned as stripped strings.
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise KeyFormatError(f"line {lineno}: expected name=value, got {raw!r}")
        name, value = (s.strip() for s in line.split("=", 1))
        if name not in allowed:
            raise KeyFormatError(f"line {lineno}: unknown field {name!r}")
        if name in out:
            raise KeyFormatError(f"line {lineno}: duplicate field {name!r}")
        out[name] = value
    return out


def format_kv(pairs, header=None):
    lines = [f"# {header}"] if header else []
    lines += [f"{k}={v}" for k, v in pairs]
    return "\n".join(lines) + "\n"


def read_text(path):
    return Path(path).read_text(encoding="utf-8")


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")
