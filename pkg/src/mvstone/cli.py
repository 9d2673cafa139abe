"""Command-line front end: ``check`` and ``report`` over spec files.

Exit status: 0 all checks pass, 1 some verdict fails, 2 usage or parse error,
3 a resource bound was hit.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .algebra import (
    DEFAULT_BOUND,
    chain_factorization,
    find_isomorphism,
    maximal_ideals,
)
from .core import PointMap, format_value
from .corpus import random_topologies
from .duality import (
    all_cuts,
    check_liminary_duality,
    check_sfc,
    check_square,
    is_lcc,
    is_limit_cut,
    limit_cut_partner,
    max_space,
    unit_iso_algebra,
    unit_iso_space,
)
from .errors import ConsistencyError, InvalidStructureError, MvError, ResourceBoundError
from .specfile import BooleNSource, SpecDocument, SpecError, TopologySource, parse_spec
from .stone_n import (
    BooleNObject,
    check_brn,
    ideals_from_relation,
    max_n,
    relation_from_ideals,
    roundtrip_boole_n,
    roundtrip_J,
    roundtrip_R,
    roundtrip_stone_n,
)
from .supernatural import format_multiset, in_basic_open, multiset_of, sn_join, sn_leq, sn_meet
from .topology import (
    MvTopology,
    check_continuous,
    check_mv_topology,
    clopen_algebra,
    discrete_crisp,
    full_topology,
    generate_from_base,
    indiscrete,
    is_compact,
    is_hausdorff,
    is_hausdorff_odot,
    is_stone_mv_space,
    is_strongly_compact,
    metric_ball_base,
    skeleton,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


@dataclass
class Outcome:
    status: str  # PASS, FAIL or BOUND
    fields: list = field(default_factory=list)
    seconds: float = 0.0


class Runner:
    def __init__(self, doc: SpecDocument, bound: int = DEFAULT_BOUND, seed: int = 0):
        self.doc = doc
        self.bound = bound
        self.seed = seed
        self._topologies: dict = {}

    # -- object resolution

    def obj(self, name):
        return self.doc.get(name).value

    def topology(self, name) -> MvTopology:
        if name not in self._topologies:
            self._topologies[name] = self._build_topology(self.doc.get(name).value)
        return self._topologies[name]

    def _build_topology(self, src: TopologySource) -> MvTopology:
        if src.form == "dual":
            return max_space(self.obj(src.algebra), self.bound).space
        if src.form == "opens":
            return MvTopology(src.universe, src.chain, src.tables)
        if src.form == "base":
            return generate_from_base(src.universe, src.chain, src.tables)
        if src.form == "discrete":
            return discrete_crisp(src.universe, src.chain)
        if src.form == "indiscrete":
            return indiscrete(src.universe, src.chain)
        if src.form == "full":
            return full_topology(src.universe, src.chain)
        _, dist = self.doc.get(src.metric).value
        return metric_ball_base(src.universe, dist, src.chain, src.radii).topology

    def boolen(self, name) -> BooleNObject:
        src: BooleNSource = self.doc.get(name).value
        return BooleNObject(src.algebra, src.n, src.ideals)

    # -- execution

    def run(self) -> list:
        results = []
        for stmt in self.doc.checks:
            t0 = time.perf_counter()
            try:
                ok, fields = getattr(self, "cmd_" + stmt.command.replace("-", "_"))(*stmt.args)
                out = Outcome("PASS" if ok else "FAIL", fields)
            except ResourceBoundError as e:
                out = Outcome("BOUND", [("error", str(e))])
            except InvalidStructureError as e:
                out = Outcome("FAIL", [("invalid", str(e))])
            except ConsistencyError as e:
                out = Outcome("FAIL", [("inconsistent", str(e))])
            out.seconds = time.perf_counter() - t0
            results.append((stmt, out))
        return results

    # -- topology commands

    def cmd_check_topology(self, name):
        src = self.doc.get(name).value
        if src.form != "opens":
            tau = self.topology(name)
            return True, [("opens", len(tau)), ("form", src.form)]
        v = check_mv_topology(src.universe, src.chain, src.tables)
        fields = [("opens", len(set(src.tables)))]
        if not v:
            order = src.chain.order
            clause, *operands = v.witness
            fields.append(("clause", clause))
            fields.append(("operands", "; ".join(_table(t, order) for t in operands)))
        return v.ok, fields

    def cmd_hausdorff(self, name):
        tau = self.topology(name)
        h, h2 = is_hausdorff(tau), is_hausdorff_odot(tau)
        if h.ok != h2.ok:
            raise ConsistencyError("meet and odot separation disagree")
        fields = [("odot_agrees", "yes")]
        if h:
            for (x, y), (ox, oy) in h.witness.items():
                fields.append((f"separate.{x},{y}", f"{_table(ox, tau.order)} | {_table(oy, tau.order)}"))
        else:
            fields.append(("unseparated", ",".join(h.witness)))
        return h.ok, fields

    def cmd_compactness(self, name):
        tau = self.topology(name)
        c, s = is_compact(tau), is_strongly_compact(tau)
        fields = [("compact", _yn(c.ok)), ("strongly_compact", _yn(s.ok)),
                  ("semantics", "finite-scale")]
        if c.ok:
            fields.append(("minimal_coverings", c.witness))
        else:
            fields.append(("uncovered_by_sums", "; ".join(_table(t, tau.order) for t in c.witness)))
        return c.ok, fields

    def cmd_skeleton(self, name):
        tau = self.topology(name)
        sk = skeleton(tau)
        return True, [("crisp_opens", len(sk)), ("delta_image", "equal"),
                      ("opens", "; ".join(_table(t, tau.order) for t in sk.tables))]

    def cmd_clopen(self, name):
        tau = self.topology(name)
        C = clopen_algebra(tau)
        return True, [("size", len(C)), ("factorization", _orders(chain_factorization(C, self.bound))),
                      ("elements", "; ".join(_table(t, tau.order) for t in C.elements))]

    def cmd_dualize_space(self, name):
        tau = self.topology(name)
        stone = is_stone_mv_space(tau)
        C = clopen_algebra(tau)
        fields = [("stone", _yn(stone.ok)), ("clop_size", len(C)),
                  ("clop_factorization", _orders(chain_factorization(C, self.bound)))]
        if not stone:
            fields.append(("fails", ",".join(stone.witness)))
        return stone.ok, fields

    def cmd_roundtrip_space(self, name):
        tau = self.topology(name)
        iso = unit_iso_space(tau, self.bound)
        fields = [("homeomorphism", "certified")]
        for x, p in zip(iso.map.source, iso.map.images):
            fields.append((f"map.{x}", p))
        for x, M in zip(tau.universe, iso.ideals):
            fields.append((f"ideal.{x}", M.format()))
        return True, fields

    def cmd_continuous(self, fname, tname, sname):
        src, dst, assign = self.doc.get(fname).value
        tau, sigma = self.topology(tname), self.topology(sname)
        f = PointMap.from_dict(src, dst, assign)
        v = check_continuous(f, tau, sigma)
        v2 = check_continuous(f, tau, sigma, via="closeds")
        if v.ok != v2.ok:
            raise ConsistencyError("open and closed forms of continuity disagree")
        fields = [("closed_form_agrees", "yes")]
        if not v:
            fields.append(("bad_open", _table(v.witness, max(tau.order, sigma.order))))
        return v.ok, fields

    def cmd_random_hausdorff(self, count):
        spaces = random_topologies(self.seed, count)
        haus = 0
        for tau in spaces:
            a, b = is_hausdorff(tau).ok, is_hausdorff_odot(tau).ok
            if a != b:
                return False, [("seed", self.seed), ("disagree", ";".join(_table(t, tau.order) for t in tau.tables))]
            haus += a
        return True, [("seed", self.seed), ("count", count), ("hausdorff", haus), ("agree", count)]

    # -- algebra commands

    def cmd_dualize_algebra(self, name):
        A = self.obj(name)
        D = max_space(A, self.bound)
        fields = [("points", ",".join(D.points)), ("grid", f"L{D.order}"), ("stone", "yes")]
        for p, M, k in zip(D.points, D.ideals, D.embedding.quotient_orders):
            fields.append((f"point.{p}", f"L{k} {M.format()}"))
        for a in A.elements:
            fields.append((f"hat.{A.fmt(a)}", _table(D.hat(a), D.order)))
        return True, fields

    def cmd_roundtrip_algebra(self, name):
        A = self.obj(name)
        h = unit_iso_algebra(A, self.bound)
        order = max_space(A, self.bound).order
        fields = [("isomorphism", "certified"), ("size", len(A))]
        for a in A.elements:
            fields.append((f"iso.{A.fmt(a)}", _table(h(a), order)))
        return True, fields

    def cmd_square(self, name):
        v = check_square(self.obj(name), self.bound)
        return v.ok, [("max_face", _yn(v.details["max_face"])), ("clop_face", _yn(v.details["clop_face"])),
                      ("boolean_points", v.details["boolean_points"])]

    def cmd_cuts(self, name):
        A = self.obj(name)
        cuts, census = all_cuts(A)
        fields = [("mode", census["mode"]), ("scanned", census["scanned"]), ("cuts", census["cuts"])]
        limit = 0
        for i, X in enumerate(cuts):
            lim = is_limit_cut(X, self.bound)
            limit += lim
            fields.append((f"cut.{i}", X.format()))
            if lim:
                fields.append((f"cut.{i}.partner", limit_cut_partner(X, self.bound).format()))
            else:
                fields.append((f"cut.{i}.limit", "no"))
        fields.insert(3, ("limit_cuts", limit))
        return True, fields

    def cmd_lcc(self, name):
        A = self.obj(name)
        v = is_lcc(A, self.bound)
        legs = check_liminary_duality(A, self.bound)
        fields = [("lcc", _yn(v.ok)), ("limit_cuts", v.details["limit_cuts"]), ("mode", v.details["mode"])]
        fields += [(k, _yn(x)) for k, x in legs.details.items()]
        fields.append(("implications", "hold" if legs.ok else "broken"))
        sfc = check_sfc(A, self.bound)
        fields.append(("sfc", _yn(sfc.ok)))
        # both classes contain every finite algebra, so agreement here is no evidence
        fields.append(("lcc_equals_sfc", "vacuously consistent"))
        return v.ok and legs.ok and sfc.ok, fields

    def cmd_factorize(self, name):
        A = self.obj(name)
        return True, [("size", len(A)), ("factors", _orders(chain_factorization(A, self.bound)))]

    def cmd_maximal_ideals(self, name):
        A = self.obj(name)
        Ms = maximal_ideals(A, self.bound)
        fields = [("count", len(Ms))]
        for i, M in enumerate(Ms):
            fields.append((f"ideal.{i}", M.format()))
            fields.append((f"ideal.{i}.certificate",
                           ", ".join(f"{A.fmt(a)}:{n}" for a, n in M.certificate)))
        return True, fields

    def cmd_multiset(self, name):
        return True, [("multiset", format_multiset(multiset_of(self.obj(name), self.bound)))]

    def cmd_isomorphic(self, aname, bname):
        A, B = self.obj(aname), self.obj(bname)
        h = find_isomorphism(A, B, self.bound)
        same = multiset_of(A, self.bound) == multiset_of(B, self.bound)
        if same != (h is not None):
            raise ConsistencyError("multiset invariant disagrees with the isomorphism search")
        fields = [("multisets_equal", _yn(same))]
        if h is not None:
            fields += [(f"iso.{A.fmt(a)}", B.fmt(h(a))) for a in A.elements]
        return h is not None, fields

    # -- Boole_n commands

    def cmd_boolen_convert(self, name):
        Bn = self.boolen(name)
        R = relation_from_ideals(Bn)
        axioms = check_brn(Bn.algebra, Bn.n, R.relation)
        back = ideals_from_relation(R)
        fields = [("br_axioms", _yn(axioms.ok)), ("relation_size", len(R.relation)),
                  ("relation", "; ".join(R.format_tuple(t) for t in sorted(R.relation))),
                  ("ideals_back", back.format())]
        return axioms.ok, fields

    def cmd_boolen_roundtrip(self, name):
        Bn = self.boolen(name)
        rj = roundtrip_J(Bn)
        rr = roundtrip_R(relation_from_ideals(Bn))
        fields = [("J", Bn.format()), ("J_of_R_J", rj.witness if rj else "-"),
                  ("roundtrip_J", _yn(rj.ok)), ("roundtrip_R", _yn(rr.ok))]
        if not rj:
            fields.append(("J_counterexample", str(rj.witness)))
        if not rr:
            fields.append(("R_counterexample", str(rr.witness)))
        return rj.ok and rr.ok, fields

    def cmd_stone_n_dualize(self, name):
        Bn = self.boolen(name)
        Sn = max_n(Bn)
        rb, rs = roundtrip_boole_n(Bn), roundtrip_stone_n(Sn)
        fields = [("points", ",".join(Sn.universe)), ("opens", Sn.format()),
                  ("clop_max_iso", _yn(rb.ok)), ("max_clop_homeo", _yn(rs.ok))]
        if rb:
            fields += [(f"iso.{a}", b) for a, b in rb.witness.items()]
        return rb.ok and rs.ok, fields

    # -- supernatural commands

    def cmd_sn_leq(self, a, b):
        x, y = self.obj(a), self.obj(b)
        return sn_leq(x, y), [("left", str(x)), ("right", str(y)), ("leq", _yn(sn_leq(x, y)))]

    def cmd_sn_join(self, a, b):
        return True, [("join", str(sn_join(self.obj(a), self.obj(b))))]

    def cmd_sn_meet(self, a, b):
        return True, [("meet", str(sn_meet(self.obj(a), self.obj(b))))]

    def cmd_sn_basic_open(self, a, n):
        x = self.obj(a)
        inside = in_basic_open(x, n)
        return inside, [("value", str(x)), ("n", n), ("member", _yn(inside))]


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _orders(orders) -> str:
    return " x ".join(f"L{o}" for o in orders)


def _table(t, order: int) -> str:
    return "(" + ", ".join(format_value(k, order) for k in t) + ")"


# -- rendering --------------------------------------------------------------


def _clean(value) -> str:
    return str(value).replace("\n", " ")


def render_kv(results) -> str:
    lines = []
    counts = {"PASS": 0, "FAIL": 0, "BOUND": 0}
    for i, (stmt, out) in enumerate(results, 1):
        counts[out.status] += 1
        lines.append(f"check.{i}.command={stmt.command}")
        lines.append(f"check.{i}.args={' '.join(map(str, stmt.args))}")
        lines.append(f"check.{i}.line={stmt.line}")
        lines.append(f"check.{i}.verdict={out.status}")
        for k, v in out.fields:
            lines.append(f"check.{i}.{k}={_clean(v)}")
    lines.append(f"summary.total={len(results)}")
    lines += [f"summary.{k.lower()}={v}" for k, v in counts.items()]
    return "\n".join(lines) + "\n"


def render_text(results, source: str) -> str:
    lines = [f"mvstone {__version__} report for {source}"]
    for i, (stmt, out) in enumerate(results, 1):
        lines.append(f"[{i}] {stmt.command} {' '.join(map(str, stmt.args))} (line {stmt.line}): "
                     f"{out.status}  {out.seconds * 1000:.1f} ms")
        for k, v in out.fields:
            lines.append(f"    {k}: {_clean(v)}")
    passed = sum(out.status == "PASS" for _, out in results)
    lines.append(f"{len(results)} checks, {passed} passed")
    return "\n".join(lines) + "\n"


def render_summary(results) -> str:
    return "".join(f"{out.status} {stmt.command} {' '.join(map(str, stmt.args))}\n" for stmt, out in results)


def exit_code(results) -> int:
    statuses = {out.status for _, out in results}
    if "BOUND" in statuses:
        return EXIT_BOUND
    return EXIT_FAIL if "FAIL" in statuses else EXIT_OK


# -- entry point ------------------------------------------------------------


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommands suppress their defaults so options given before the subcommand survive
    common = argparse.ArgumentParser(add_help=False)
    seed = argparse.SUPPRESS if suppress else 0
    bound = argparse.SUPPRESS if suppress else DEFAULT_BOUND
    common.add_argument("--seed", type=int, default=seed, help="seed for randomized checks (default 0)")
    common.add_argument("--bound", type=int, default=bound,
                        help=f"largest non-product algebra to enumerate ideals of (default {DEFAULT_BOUND})")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvstone", description="Finite MV-algebra and MV-topology checks.",
                                     parents=[_common_options(False)])
    parser.add_argument("--version", action="version", version=f"mvstone {__version__}")
    sub = parser.add_subparsers(dest="action", required=True)
    common = _common_options(True)
    chk = sub.add_parser("check", parents=[common], help="run every check, print one line each")
    chk.add_argument("file")
    rep = sub.add_parser("report", parents=[common], help="run every check and print a full report")
    rep.add_argument("--format", choices=("text", "kv"), default="text")
    rep.add_argument("file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        print(f"mvstone: cannot read {path}: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        doc = parse_spec(text)
    except SpecError as e:
        print(f"{path}:{e}", file=sys.stderr)
        return EXIT_USAGE
    except MvError as e:
        print(f"{path}: {e}", file=sys.stderr)
        return EXIT_USAGE
    results = Runner(doc, bound=args.bound, seed=args.seed).run()
    if args.action == "check":
        sys.stdout.write(render_summary(results))
    elif args.format == "kv":
        sys.stdout.write(render_kv(results))
    else:
        sys.stdout.write(render_text(results, path.name))
    return exit_code(results)


if __name__ == "__main__":
    sys.exit(main())
