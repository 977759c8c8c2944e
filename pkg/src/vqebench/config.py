"""Minimal key-value/table config format.

Sections are bracketed dotted paths, values are strings, numbers, booleans,
or flat lists; `#` starts a comment. Enough structure for optimizer tables
like:

    optimizer = "spsa"
    [optimizer.spsa]
    c = 0.1
    alpha = 0.602
"""

from __future__ import annotations

from .errors import SchemaError


def _parse_scalar(token: str):
    token = token.strip()
    if not token:
        raise SchemaError("empty value in config")
    if token.startswith('"') and token.endswith('"') and len(token) >= 2:
        return token[1:-1]
    if token == "true":
        return True
    if token == "false":
        return False
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise SchemaError(f"cannot parse config value {token!r}") from None


def _split_list(inner: str) -> list[str]:
    parts = []
    depth = 0
    current = ""
    for ch in inner:
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
            continue
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        current += ch
    if current.strip():
        parts.append(current)
    return parts


def _parse_value(token: str):
    token = token.strip()
    if token.startswith("[") and token.endswith("]"):
        return [_parse_value(p) for p in _split_list(token[1:-1])]
    return _parse_scalar(token)


def _strip_comment(line: str) -> str:
    out = []
    in_string = False
    for ch in line:
        if ch == '"':
            in_string = not in_string
        if ch == "#" and not in_string:
            break
        out.append(ch)
    return "".join(out)


def parse_config(text: str) -> dict:
    """A key may coexist with a same-named table (`optimizer = "spsa"` plus
    `[optimizer.spsa]`); the scalar then moves under the table's "" slot and
    `config_value` unwraps it."""
    root: dict = {}
    section = root
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = root
            for part in line[1:-1].strip().split("."):
                if not part:
                    raise SchemaError(f"line {lineno}: empty section name")
                existing = section.get(part)
                if existing is None:
                    section = section.setdefault(part, {})
                elif isinstance(existing, dict):
                    section = existing
                else:
                    section[part] = {"": existing}
                    section = section[part]
            continue
        if "=" not in line:
            raise SchemaError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise SchemaError(f"line {lineno}: empty key")
        parsed = _parse_value(value)
        if isinstance(section.get(key), dict):
            section[key][""] = parsed
        else:
            section[key] = parsed
    return root


def config_value(config: dict, key: str, default=None):
    """Scalar lookup that sees through a scalar-and-table coexistence."""
    value = config.get(key, default)
    if isinstance(value, dict):
        return value.get("", default)
    return value
