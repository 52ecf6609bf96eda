"""Reader for ``.surf`` surface definition files.

Format::

    # comment
    [surface]
    name = cycloid
    x = (2+cos(u))*cos(v)
    y = (2+cos(u))*sin(v)
    z = u - sin(u)
    u_range = -6 6
    v_range = 0 6.283185307179586
    co_orientation = 1          # optional, default 1
    points = 0 3.14159          # optional, ';'-separated (u v) pairs

Errors carry ``path:line:column`` locations.
"""

from __future__ import annotations

import os
from importlib import resources

from .errors import ExprError, SurfaceFileError
from .expr import SurfaceDefinition, parse_expression

REQUIRED = ("x", "y", "z", "u_range", "v_range")
OPTIONAL = ("name", "co_orientation", "points")


def _floats(text: str, count, path, line, col, key):
    parts = text.replace(",", " ").split()
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise SurfaceFileError(f"{key} must be numbers, got {text!r}", path, line, col) from None
    if count is not None and len(vals) != count:
        raise SurfaceFileError(f"{key} needs {count} numbers, got {len(vals)}", path, line, col)
    return vals


def parse_surface_text(text: str, path: str = "<string>") -> SurfaceDefinition:
    entries: dict[str, tuple[str, int, int]] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SurfaceFileError("unterminated section header", path, lineno, indent + 1)
            section = stripped[1:-1].strip()
            if section != "surface":
                raise SurfaceFileError(f"unknown section [{section}]", path, lineno, indent + 1)
            continue
        if "=" not in line:
            raise SurfaceFileError("expected 'key = value'", path, lineno, indent + 1)
        if section is None:
            raise SurfaceFileError("key outside the [surface] section", path, lineno, indent + 1)
        key, value = line.split("=", 1)
        key = key.strip()
        vcol = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        if key not in REQUIRED + OPTIONAL:
            raise SurfaceFileError(f"unknown key {key!r}", path, lineno, indent + 1)
        if key in entries:
            raise SurfaceFileError(f"duplicate key {key!r}", path, lineno, indent + 1)
        entries[key] = (value.strip(), lineno, vcol)
    if section is None:
        raise SurfaceFileError("missing [surface] section", path, 1, 1)
    for key in REQUIRED:
        if key not in entries:
            raise SurfaceFileError(f"missing key {key}", path)

    exprs = {}
    for key in ("x", "y", "z"):
        val, ln, col = entries[key]
        try:
            exprs[key] = parse_expression(val)
        except ExprError as exc:
            c = col + (exc.position or 0)
            msg = str(exc).split(" (at position")[0]
            raise SurfaceFileError(f"in {key}: {msg}", path, ln, c) from None
    ranges = {k: _floats(entries[k][0], 2, path, entries[k][1], entries[k][2], k)
              for k in ("u_range", "v_range")}
    co = 1
    if "co_orientation" in entries:
        val, ln, col = entries["co_orientation"]
        if val not in ("1", "+1", "-1"):
            raise SurfaceFileError("co_orientation must be 1 or -1", path, ln, col)
        co = int(val)
    points = []
    if "points" in entries:
        val, ln, col = entries["points"]
        for chunk in val.split(";"):
            if chunk.strip():
                points.append(tuple(_floats(chunk, 2, path, ln, col, "points")))
    name = entries["name"][0] if "name" in entries else os.path.splitext(os.path.basename(path))[0]
    try:
        surf = SurfaceDefinition(
            name, exprs["x"], exprs["y"], exprs["z"],
            tuple(ranges["u_range"]), tuple(ranges["v_range"]), co, tuple(points),
            {k: entries[k][0] for k in ("x", "y", "z")},
        )
    except SurfaceFileError as exc:
        raise SurfaceFileError(str(exc), path) from None
    return surf


def load_surface_file(path) -> SurfaceDefinition:
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SurfaceFileError(f"cannot read file: {exc.strerror}", path) from None
    except UnicodeDecodeError:
        raise SurfaceFileError("file is not valid UTF-8", path) from None
    return parse_surface_text(text, path)


def fixture_path(name: str) -> str:
    """Path of a bundled fixture such as ``'fplus'`` or ``'cycloid'``."""
    return str(resources.files("cuspedge").joinpath("data", f"{name}.surf"))


def load_fixture(name: str) -> SurfaceDefinition:
    return load_surface_file(fixture_path(name))
