"""Human-readable witness layout: one column per session."""

from __future__ import annotations

from . import values


def show_value(v, row_names: dict) -> str:
    if v is None:
        return "-"
    return row_names.get(v, values.show(v))


def action(ev, loc_names, row_names) -> str:
    loc = loc_names[ev.loc]
    sv = lambda v: show_value(v, row_names)  # noqa: E731
    if ev.kind == "R":
        return f"{ev.label}:R({loc},{sv(ev.rval)})"
    if ev.kind == "W":
        return f"{ev.label}:W({loc},{sv(ev.wval)})"
    return f"{ev.label}:U({loc},{sv(ev.rval)},{sv(ev.wval)})"


def inv_header(method: str, arg, ret, complete: bool, producer: str, row_names) -> str:
    if method == producer and method != "exchange":
        head = f"{method}({arg})"
    elif method == "exchange":
        head = f"exchange({arg})" + (f":{show_value(ret, row_names)}" if complete else "")
    else:
        head = f"{method}" + (f":{show_value(ret, row_names)}" if complete else "")
    return head if complete else head + " [incomplete]"


def reads_from(w) -> list[tuple[int, int | None]]:
    """(reader index, source index or None for the initial value) in schedule order."""
    vis_in = {n: set() for n in range(len(w.events))}
    idx = {e.id: n for n, e in enumerate(w.events)}
    for a, b in w.vis:
        vis_in[idx[b]].add(idx[a])
    out = []
    for n, e in enumerate(w.events):
        if e.kind == "W":
            continue
        cands = [m for m in vis_in[n] if w.events[m].kind != "R" and w.events[m].loc == e.loc]
        src = max(cands, key=lambda m: (w.events[m].arpos is None, w.events[m].arpos or 0, m)) if cands else None
        out.append((n, src))
    return out


def render_witness(w, producer: str) -> str:
    cols = []
    by_inv = {}
    for e in w.events:
        by_inv.setdefault(e.inv, []).append(e)
    for s, row in enumerate(w.sessions, start=1):
        lines = [f"session {s}"]
        for slot, m, arg in row:
            done = slot in w.rets
            lines.append(f"inv{slot} " + inv_header(m, arg, w.rets.get(slot), done, producer, w.row_names))
            for e in sorted(by_inv.get(slot, []), key=lambda e: e.id):
                lines.append("  " + action(e, w.loc_names, w.row_names))
        cols.append(lines)
    width = max(len(x) for c in cols for x in c) + 3
    height = max(len(c) for c in cols)
    out = []
    for i in range(height):
        out.append("".join((c[i] if i < len(c) else "").ljust(width) for c in cols).rstrip())
    out.append("")
    out.append("reads-from:")
    for n, src in reads_from(w):
        e = w.events[n]
        rhs = "initial value" if src is None else f"inv{w.events[src].inv} " + action(w.events[src], w.loc_names, w.row_names)
        out.append(f"  inv{e.inv} {action(e, w.loc_names, w.row_names)}  <-  {rhs}")
    return "\n".join(out)


def store_trace(chi, uni) -> dict:
    """JSON-ready dump of a store state: events plus vis, so, ar and rf."""
    names, rows = list(uni.names), dict(uni.row_names)
    events = [{"id": e.id, "session": e.session, "inv": e.slot,
               "action": action(e, names, rows)} for e in chi.events]
    rf = {}
    for e, src in zip(chi.events, chi.rf):
        if src is not None:
            rf[str(e.id)] = None if src < 0 else src
    return {
        "events": events,
        "vis": sorted(chi.pairs(chi.vis_in)),
        "so": sorted(chi.pairs(chi.so_in)),
        "ar": {names[loc]: list(order) for loc, order in chi.ar},
        "rf": rf,  # reader id -> source id, null for the initial value
    }


def show_trace(tr: dict) -> list[str]:
    sees = {}
    for a, b in tr["vis"]:
        sees.setdefault(b, []).append(a)
    out = []
    for e in tr["events"]:
        line = f"    e{e['id']} s{e['session']} inv{e['inv']} {e['action']}"
        if e["id"] in sees:
            line += "  sees " + ",".join(f"e{a}" for a in sees[e["id"]])
        out.append(line)
    for loc, order in tr["ar"].items():
        out.append(f"    ar {loc}: " + " < ".join(f"e{x}" for x in order))
    return out
