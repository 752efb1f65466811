"""Control and data dependence analyses over statement-level CFGs."""

from __future__ import annotations

from .cfg import Cfg


def postdominators(succ: dict[int, list[int]], nodes: list[int], exit_id: int) -> dict[int, set[int]]:
    """Iterative set-intersection post-dominance; requires every node to
    reach the exit (build_cfg guarantees this with synthetic edges).
    Nodes are visited in reverse-flow order so the fixpoint settles in a
    handful of passes."""
    order = []
    preds: dict[int, list[int]] = {n: [] for n in nodes}
    for node in nodes:
        for s in succ.get(node, []):
            preds[s].append(node)
    seen = {exit_id}
    queue = [exit_id]
    while queue:
        node = queue.pop(0)
        order.append(node)
        for p in preds[node]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    order += [n for n in nodes if n not in seen]

    pdom: dict[int, set[int]] = {n: set(nodes) for n in nodes}
    pdom[exit_id] = {exit_id}
    changed = True
    while changed:
        changed = False
        for node in order:
            if node == exit_id:
                continue
            succs = succ.get(node, [])
            if succs:
                new = set.intersection(*(pdom[s] for s in succs))
            else:
                new = set()
            new = new | {node}
            if new != pdom[node]:
                pdom[node] = new
                changed = True
    return pdom


def immediate_postdominators(pdom: dict[int, set[int]], exit_id: int) -> dict[int, int]:
    ipdom: dict[int, int] = {}
    for node, doms in pdom.items():
        if node == exit_id:
            continue
        strict = doms - {node}
        # The immediate post-dominator is the strict one that every other
        # strict post-dominator itself post-dominates (the closest one).
        for cand in strict:
            if all(other in pdom[cand] for other in strict):
                ipdom[node] = cand
                break
    return ipdom


def control_dependencies(cfg: Cfg) -> set[tuple[int, int]]:
    """Ferrante-Ottenstein-Warren control dependence.

    The CFG is augmented with an entry->exit edge first, which is what
    makes statements governed by no predicate come out as control
    dependent on the entry node.
    """
    nodes = list(cfg.nodes)
    succ = {n: list(dict.fromkeys(cfg.successor_ids(n))) for n in nodes}
    if cfg.exit_id not in succ[cfg.entry_id]:
        succ[cfg.entry_id].append(cfg.exit_id)

    pdom = postdominators(succ, nodes, cfg.exit_id)
    ipdom = immediate_postdominators(pdom, cfg.exit_id)

    deps: set[tuple[int, int]] = set()
    for a in nodes:
        for b in succ[a]:
            if b != a and b in pdom[a]:
                continue  # b strictly post-dominates a: nothing to mark
            runner = b
            limit = ipdom.get(a)
            seen = set()
            while runner != limit and runner not in seen:
                seen.add(runner)
                deps.add((a, runner))
                nxt = ipdom.get(runner)
                if nxt is None:
                    break
                runner = nxt
    return deps


def _reverse_postorder(succ: dict[int, list[int]], entry: int, nodes: list[int]) -> list[int]:
    order: list[int] = []
    seen: set[int] = set()
    stack: list[tuple[int, int]] = [(entry, 0)]
    seen.add(entry)
    while stack:
        node, idx = stack[-1]
        succs = succ.get(node, [])
        if idx < len(succs):
            stack[-1] = (node, idx + 1)
            nxt = succs[idx]
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, 0))
        else:
            order.append(node)
            stack.pop()
    order.reverse()
    return order + [n for n in nodes if n not in seen]


def reaching_definitions(cfg: Cfg) -> dict[int, set[tuple[str, int]]]:
    """Forward may-analysis to fixpoint; returns IN sets of (var, def site).

    State is kept per variable (var -> def sites) so a kill is a key
    drop instead of a scan over every live pair. Round-robin passes in
    reverse postorder converge in loop-depth-plus-two sweeps.
    """
    nodes = list(cfg.nodes)
    kills = {n: cfg.nodes[n].defs for n in nodes}
    preds = cfg.predecessors()
    succ = {n: cfg.successor_ids(n) for n in nodes}
    rpo = _reverse_postorder(succ, cfg.entry_id, nodes)

    in_state: dict[int, dict[str, frozenset[int]]] = {n: {} for n in nodes}
    out_state: dict[int, dict[str, frozenset[int]]] = {
        n: {v: frozenset([n]) for v in cfg.nodes[n].defs} for n in nodes
    }
    changed = True
    while changed:
        changed = False
        for node in rpo:
            merged: dict[str, frozenset[int]] = {}
            for p in preds[node]:
                for var, sites in out_state[p].items():
                    present = merged.get(var)
                    merged[var] = sites if present is None else present | sites
            in_state[node] = merged
            new_out = {var: sites for var, sites in merged.items() if var not in kills[node]}
            for var in cfg.nodes[node].defs:
                new_out[var] = frozenset([node])
            if new_out != out_state[node]:
                out_state[node] = new_out
                changed = True

    return {
        n: {(var, site) for var, sites in state.items() for site in sites}
        for n, state in in_state.items()
    }


def data_dependencies(cfg: Cfg) -> set[tuple[int, int, str]]:
    """Def-use edges: definition at d reaches a use of the same variable at u.

    Loop-carried flows show up as (u, u, v) pairs when a statement's own
    definition reaches back around to its use.
    """
    in_sets = reaching_definitions(cfg)
    edges: set[tuple[int, int, str]] = set()
    for node_id, node in cfg.nodes.items():
        if not node.uses:
            continue
        for var, def_site in in_sets[node_id]:
            if var in node.uses:
                edges.add((def_site, node_id, var))
    return edges
