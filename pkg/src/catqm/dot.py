"""Static Graphviz export of morphism terms.

One node per constructor, labelled with its kind and judgment.  Node ids
are pre-order indices, so the output is byte-reproducible for a given
term.  Composition runs vertically (the default rank direction); the two
sides of a tensor are pinned to the same rank.
"""

from __future__ import annotations

from . import kernel as k


def _label(t: k.MorphismTerm, sig: k.Signature) -> str:
    kind = type(t).__name__
    if isinstance(t, k.GenMor):
        kind = f"GenMor {t.name}"
    elif isinstance(t, k.ScalarMul):
        kind = f"ScalarMul {t.scalar}"
    elif isinstance(t, (k.Inj, k.Proj)):
        kind = f"{kind} {t.index}"
    j = k.typecheck(t, sig)
    return f"{kind}\\n{j}"


def export_dot(t: k.MorphismTerm, sig: k.Signature) -> str:
    """Deterministic DOT digraph of a typechecked term."""
    k.typecheck(t, sig)
    lines = [
        "digraph term {",
        '  node [shape=box, fontname="monospace"];',
        "  rankdir=TB;",
    ]
    same_rank = []
    counter = [0]

    def walk(node):
        my_id = counter[0]
        counter[0] += 1
        label = _label(node, sig).replace('"', '\\"')
        lines.append(f'  n{my_id} [label="{label}"];')
        child_ids = []
        for child in k.term_children(node):
            child_ids.append(walk(child))
        for cid in child_ids:
            lines.append(f"  n{my_id} -> n{cid};")
        if isinstance(node, (k.TensorM, k.Plus)) and len(child_ids) == 2:
            same_rank.append(tuple(child_ids))
        elif isinstance(node, (k.Pair, k.Copair)) and len(child_ids) > 1:
            same_rank.append(tuple(child_ids))
        return my_id

    walk(t)
    for group in same_rank:
        members = "; ".join(f"n{i}" for i in group)
        lines.append(f"  {{ rank=same; {members}; }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def node_count(dot_text: str) -> int:
    return sum(1 for line in dot_text.splitlines() if "[label=" in line)
