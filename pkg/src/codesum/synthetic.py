"""Rule-generated Java methods with known summaries, for smoke tests and demos.

Every method belongs to a structural family (setter, getter, closer, ...).
Identifiers, types, modifiers and optional extra statements vary at random,
so the family can only be recognised from the shape of the code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import MethodRecord

NOUNS = (
    "token url name count player score value size color path user id timeout port host "
    "buffer index label title width height owner state level rate limit offset status "
    "message mode flag key depth weight price amount total parent child node entry"
).split()
TYPES = ("int", "long", "String", "boolean", "double", "Object", "List<String>", "Integer", "Config", "byte[]")
RESOURCES = ("connection", "stream", "socket", "reader", "writer", "channel", "session", "file")
FAMILIES = ("setter", "getter", "closer")

# Summaries that depend on the family alone.
STRUCTURAL_SUMMARIES = {
    "setter": "sets the value",
    "getter": "returns the value",
    "closer": "closes the connection",
}


@dataclass
class SyntheticMethod:
    family: str
    source: str
    summary: str


def _camel(words: list[str]) -> str:
    return words[0] + "".join(w.capitalize() for w in words[1:])


def _field(rng: random.Random) -> list[str]:
    return rng.sample(NOUNS, rng.choice((1, 1, 2, 2, 3)))


def _modifiers(rng: random.Random) -> str:
    mods = [rng.choice(("public", "public", "protected", "private"))]
    if rng.random() < 0.2:
        mods.append("final")
    if rng.random() < 0.15:
        mods.append("synchronized")
    return " ".join(mods)


def _setter(rng: random.Random, words: list[str]) -> str:
    name = _camel(words)
    typ = rng.choice(TYPES)
    body = []
    if rng.random() < 0.3:
        body.append(f'if ({name} == null) {{ throw new IllegalArgumentException("{name}"); }}')
    if rng.random() < 0.3:
        body.append(f'log.debug("setting {name}");')
    body.append(f"this.{name} = {name};")
    if rng.random() < 0.2:
        body.append("changed = true;")
    return f"{_modifiers(rng)} void set{name[0].upper()}{name[1:]}({typ} {name}) {{ {' '.join(body)} }}"


def _getter(rng: random.Random, words: list[str]) -> str:
    name = _camel(words)
    typ = rng.choice(TYPES)
    prefix = "is" if typ == "boolean" and rng.random() < 0.5 else "get"
    body = []
    if rng.random() < 0.3:
        body.append(f"if ({name} == null) {{ {name} = create{name[0].upper()}{name[1:]}(); }}")
    if rng.random() < 0.2:
        body.append(f'log.trace("reading {name}");')
    body.append(f"return {rng.choice(('', 'this.'))}{name};")
    return f"{_modifiers(rng)} {typ} {prefix}{name[0].upper()}{name[1:]}() {{ {' '.join(body)} }}"


def _closer(rng: random.Random, words: list[str]) -> str:
    res = rng.choice(RESOURCES)
    target = _camel(words + [res]) if rng.random() < 0.5 else res
    catches = [f"catch (IOException e) {{ log.warn(\"close failed\", e); }}"]
    if rng.random() < 0.3:
        catches.append("catch (RuntimeException e) { failed = true; }")
    tail = f" finally {{ {target} = null; }}" if rng.random() < 0.4 else ""
    guard = f"if ({target} != null) {{ {target}.close(); }}" if rng.random() < 0.4 else f"{target}.close();"
    return (
        f"{_modifiers(rng)} void close{target[0].upper()}{target[1:]}() "
        f"{{ try {{ {guard} }} {' '.join(catches)}{tail} }}"
    )


_BUILDERS = {"setter": _setter, "getter": _getter, "closer": _closer}


def _descriptive_summary(family: str, words: list[str]) -> str:
    phrase = " ".join(words)
    return {
        "setter": f"sets the {phrase}",
        "getter": f"returns the {phrase}",
        "closer": f"closes the {phrase}",
    }[family]


def generate_methods(
    n: int, seed: int = 0, families=FAMILIES, structural_summaries: bool = True
) -> list[SyntheticMethod]:
    """``n`` methods cycling through ``families``.

    With ``structural_summaries`` the summary is fixed per family; otherwise
    it also names the field the method touches (e.g. "sets the token url").
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        family = families[i % len(families)]
        words = _field(rng)
        source = _BUILDERS[family](rng, words)
        summary = STRUCTURAL_SUMMARIES[family] if structural_summaries else _descriptive_summary(family, words)
        out.append(SyntheticMethod(family, source, summary))
    return out


def to_records(methods: list[SyntheticMethod], n_projects: int = 10, seed: int = 0) -> list[MethodRecord]:
    """Wrap methods as corpus records spread over ``n_projects`` projects."""
    rng = random.Random(seed)
    records = []
    for i, m in enumerate(methods):
        project = f"project{rng.randrange(n_projects):02d}"
        doc = f"/**\n * {m.summary[0].upper()}{m.summary[1:]}.\n */"
        file_text = f"package {project};\n\npublic class C{i} {{\n{doc}\n{m.source}\n}}\n"
        records.append(MethodRecord(i, project, file_text, m.source, doc))
    return records
