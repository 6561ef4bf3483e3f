"""DOT (Graphviz) exports: one-skeletons, groupoid presentations, spans."""

from __future__ import annotations

from .serialize import enc_label


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def sset_dot(sset, name: str = "nerve") -> str:
    """The 1-skeleton: vertices as nodes, 1-simplices as labelled arcs,
    degenerate arcs dashed."""
    degenerate = {sset.deg(0, 0, i) for i in sset.s0}
    lines = [f"digraph {name} {{"]
    for i in sset.s0:
        lines.append(f"  {_q(enc_label(i))};")
    for l in sset.s1:
        i, j = sset.endpoints(l)
        style = ", style=dashed" if l in degenerate else ""
        lines.append(
            f"  {_q(enc_label(i))} -> {_q(enc_label(j))} [label={_q(enc_label(l))}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_dot(pres, name: str = "groupoid") -> str:
    """Objects as nodes, generators as arcs, relations as a graph label."""
    lines = [f"digraph {name} {{"]
    rel = f"{len(pres.relations)} relations"
    lines.append(f"  label={_q(rel)};")
    ident = set(pres.identities.values())
    for o in pres.objects:
        lines.append(f"  {_q(enc_label(o))};")
    for g in pres.generators:
        style = ", style=dashed" if g in ident else ""
        lines.append(
            f"  {_q(enc_label(pres.src[g]))} -> {_q(enc_label(pres.tgt[g]))}"
            f" [label={_q(enc_label(g))}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def family_spans_dot(f, name: str = "spans") -> str:
    """One cluster per 1-simplex: the span vertex with its two legs."""
    lines = [f"digraph {name} {{", "  compound=true;"]
    for n, l in enumerate(f.sset.s1):
        i, j = f.sset.endpoints(l)
        comp = f.component(1, l)
        lines.append(f"  subgraph cluster_{n} {{")
        lines.append(f"    label={_q(enc_label(l))};")
        lines.append(f"    v{n} [label={_q(f'vertex: {comp.size()} elements')}];")
        lines.append(f"    l{n} [label={_q(enc_label(i))}];")
        lines.append(f"    r{n} [label={_q(enc_label(j))}];")
        lines.append(f"    v{n} -> l{n};")
        lines.append(f"    v{n} -> r{n};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
