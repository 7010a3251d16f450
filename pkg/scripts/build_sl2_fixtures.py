"""Expand the indexed relator families of the SL_2(Z[1/p, zeta_p]) presentations.

Writes src/lowhom/fixtures/sl2_{3,5,7}.pres. Families are expanded over all
ordered index pairs (so [u1,u1] and [b1,b1] are kept). Letters
naming generators absent from the generator list (u2, u3, b5 for
small p) are dropped, i.e. read as the identity, and flagged in the output.
"""

from __future__ import annotations

import argparse
import itertools
import re
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "lowhom" / "fixtures"

GENERATORS = {
    3: ["z", "u1", "a", "b", "b0", "b1", "b2", "w"],
    5: ["z", "u1", "u2", "a", "b", "b0", "b1", "b2", "b3", "b4", "w"],
    7: ["z", "u1", "u2", "u3", "a", "b", "b0", "b1", "b2", "b3", "b4", "b5", "b6", "w"],
}
U_RANGE = {3: [1], 5: [1, 2], 7: [1, 2, 3]}
B_RANGE = {3: [1, 2], 5: [1, 2, 3, 4], 7: [1, 2, 3, 4, 5, 6]}

CUBES = {
    3: ["b0 b1^-1 a^-1 u1"],
    5: ["b0 b1^-1 a^-1 u1", "b0 b2^-1 a^-1 u2", "b0 b3^-1 a^-1 u3",
        "b0 b1^-1 b2^-1 b3 a^-1 u1 u2", "b0 b1^-1 b3^-1 b4 a^-1 u1 u3",
        "b0 b2^-1 b3^-1 b5 a^-1 u2 u3"],
    7: ["b0 b1^-1 a^-1 u1", "b0 b2^-1 a^-1 u2", "b0 b3^-1 a^-1 u3",
        "b0 b1^-1 b2^-1 b3 a^-1 u1 u2", "b0 b1^-1 b3^-1 b4 a^-1 u1 u3",
        "b0 b2^-1 b3^-1 b5 a^-1 u2 u3",
        "b0 b1^-1 b2^-1 b3 b4 b5 b6^-1 a^-1 u1 u2 u3"],
}


def relator_families(p: int) -> list[tuple[str, str]]:
    """(family label, relator text) in family order."""
    us, bs = U_RANGE[p], B_RANGE[p]
    out = []
    for t in bs:
        out.append(("b_t^-1 z^3t b z^3t a", f"b{t}^-1 z^{3 * t} b z^{3 * t} a"))
    out.append(("w^-1 z^4 u1 u2 u3", "w^-1 z^4 u1 u2 u3"))
    out.append(("z^p", f"z^{p}"))
    for i in us:
        out.append(("[z,u_i]", f"[z, u{i}]"))
    for i, j in itertools.product(us, us):
        out.append(("[u_i,u_j]", f"[u{i}, u{j}]"))
    out.append(("a^4", "a^4"))
    out.append(("[a^2,z]", "[a^2, z]"))
    for i in us:
        out.append(("[a^2,u_i]", f"[a^2, u{i}]"))
    out.append(("a^-1 z a z", "a^-1 z a z"))
    for i in us:
        out.append(("a^-1 u_i a u_i", f"a^-1 u{i} a u{i}"))
    for s, t in itertools.product(bs, bs):
        out.append(("[b_s,b_t]", f"[b{s}, b{t}]"))
    out.append(("b^-3 a^2", "b^-3 a^2"))
    out.append(("b^-3 b0 ... b_{p-1}", "b^-3 " + " ".join(f"b{i}" for i in range(p))))
    if p == 7:
        for t in bs:
            out.append(("b_t^-7 w^-1 b_t^-1 w", f"b{t}^-7 w^-1 b{t}^-1 w"))
    for cube in CUBES[p]:
        out.append(("(...)^3", f"({cube})^3"))
    if p == 3:
        out.append(("a^-2 b^-1 u1 b z^-3 b^-1 b0^-1 z^3 b z^-1 u1",
                    "a^-2 b^-1 u1 b z^-3 b^-1 b0^-1 z^3 b z^-1 u1"))
    else:
        for i in us:
            out.append(("a^-2 b^-1 u_i b z^-3i b^-1 b0^-1 z^3i b z^-i u_i",
                        f"a^-2 b^-1 u{i} b z^{-3 * i} b^-1 b0^-1 z^{3 * i} b z^{-i} u{i}"))
    return out


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def drop_undeclared(text: str, generators: list[str]) -> tuple[str, list[str]]:
    dropped = []
    kept = []
    for token in text.split(" "):
        name = _NAME.match(token.lstrip("(["))
        if name and name.group() not in generators:
            dropped.append(name.group())
            # keep any bracket/parenthesis attached to the dropped letter
            prefix = token[: len(token) - len(token.lstrip("(["))]
            suffix = token[len(prefix) + name.end():]
            suffix = re.sub(r"^\^-?\d+", "", suffix)
            token = prefix + suffix
            if not token:
                continue
        kept.append(token)
    return " ".join(kept).replace("( ", "(").replace(" )", ")"), dropped


def render(p: int) -> str:
    gens = GENERATORS[p]
    lines = [
        f"# SL_2(Z[1/{p}, zeta_{p}]); homology at p = {p}.",
        "# Indexed families expanded over all ordered index pairs.",
        "# Expected: d = 0." if p != 7 else "# Expected: d <= 6.",
        f"generators: {', '.join(gens)}",
        "relators:",
    ]
    for label, text in relator_families(p):
        rel, dropped = drop_undeclared(text, gens)
        note = f"  # {label}"
        if dropped:
            note += f"  [suspected typo: {', '.join(dropped)} not a generator, read as 1]"
        lines.append(f"  {rel};{note}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=FIXTURE_DIR)
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    for p in (3, 5, 7):
        path = args.out / f"sl2_{p}.pres"
        path.write_text(render(p), encoding="utf-8")
        print(f"wrote {path} ({len(relator_families(p))} relators)")


if __name__ == "__main__":
    main()
