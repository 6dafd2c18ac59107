"""Command-line front end: ``pervcalc <command> [options]``.

Exit codes: 0 success/pass, 1 property violation or confirmed mismatch,
2 input or usage error (one diagnostic line on stderr).  Reports are text by
default and JSON with ``--json``; the same argv and files always give the
same bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .checks import COUNTEREXAMPLE, SUITES, UNSUPPORTED, check_image_variant, fuzz, run_trial
from .errors import InputError
from .functors import (
    Location,
    characteristic_cycle,
    characteristic_cycle_or_none,
    induced_stalk_maps,
    locations,
    stalk_cohomology,
    support,
)
from .gallery import NAMES, gallery, gallery_objects
from .linalg import ModuleMap, Ring
from .perv import (
    PervMorphism,
    PervObject,
    find_isomorphism,
    hom_space,
    morphism_classify,
    perv_factorization,
    validate_morphism,
    validate_object,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
SEED_ENV = "PERVCALC_SEED"


class _Parser(argparse.ArgumentParser):
    """argparse with errors routed to the single-line exit-2 path."""

    def error(self, message):
        raise InputError(f"usage: {message}")


class _Report:
    """A report: JSON payload plus its text rendering, and an exit code."""

    def __init__(self, data: dict, lines: list[str], code: int = EXIT_OK):
        self.data = data
        self.lines = lines
        self.code = code

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        return "\n".join(self.lines) + "\n"


# -- loading ------------------------------------------------------------------


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})") from None


def _load(path: str | None, *, validate: bool = True):
    value = io.loads(_read(path))
    if validate:
        _require_valid(value)
    return value


def _require_valid(value) -> None:
    if isinstance(value, PervObject):
        rep = validate_object(value)
        where = "object"
    else:
        for name, obj in (("source", value.source), ("target", value.target)):
            rep = validate_object(obj)
            if not rep.ok:
                raise InputError(f"morphism.{name}: invalid object: {rep.violations[0]}")
        rep = validate_morphism(value)
        where = "morphism"
    if not rep.ok:
        raise InputError(f"{where}: invalid: {rep.violations[0]}")


def _load_object(path: str | None, what: str) -> PervObject:
    value = _load(path)
    if not isinstance(value, PervObject):
        raise InputError(f"{what}: expected an object file, got a morphism")
    return value


def _load_morphism(path: str | None, what: str) -> PervMorphism:
    value = _load(path)
    if not isinstance(value, PervMorphism):
        raise InputError(f"{what}: expected a morphism file, got an object")
    return value


def _default_seed() -> int:
    text = os.environ.get(SEED_ENV)
    if text is None:
        return 0
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{SEED_ENV}: not an integer: {text!r}") from None


# -- shared descriptions --------------------------------------------------------


def _stalks(P: PervObject) -> dict:
    out = {}
    for loc in locations(P.branches):
        st = stalk_cohomology(P, loc)
        out[str(loc)] = {str(k): str(st[k]) for k in (-1, 0)}
    return out


def _stalk_text(stalks: dict) -> str:
    return "; ".join(f"{loc}: H^-1 = {g['-1']}, H^0 = {g['0']}" for loc, g in stalks.items())


def _gallery_matches(P: PervObject, seed: int) -> list[str]:
    if P.is_zero():
        return []
    out = []
    for name, G in gallery_objects(P.ring).items():
        if G.branches == P.branches and find_isomorphism(P, G, seed=seed).verdict == "isomorphic":
            out.append(name)
    return out


def _describe(P: PervObject, seed: int = 0, matches: bool = True) -> dict:
    cc = characteristic_cycle_or_none(P)
    d = {
        "psi": [str(M) for M in P.psi],
        "phi": str(P.phi),
        "zero": P.is_zero(),
        "support": str(support(P)),
        "stalks": _stalks(P),
        "cc": None if cc is None else str(cc),
    }
    if matches:
        d["matches"] = _gallery_matches(P, seed)
    return d


def _describe_lines(name: str, d: dict) -> list[str]:
    lines = [f"{name}: psi = [{', '.join(d['psi'])}], phi = {d['phi']}",
             f"  support: {d['support']}",
             f"  stalks: {_stalk_text(d['stalks'])}"]
    if d["cc"] is not None:
        lines.append(f"  cc: {d['cc']}")
    if "matches" in d:
        lines.append(f"  matches: {', '.join(d['matches']) if d['matches'] else '-'}")
    return lines


def _map_json(f: ModuleMap) -> dict:
    return {"source": str(f.domain), "target": str(f.codomain),
            "matrix": io.matrix_to_json(f.matrix), "zero": f.is_zero()}


def _head(value) -> dict:
    kind = "object" if isinstance(value, PervObject) else "morphism"
    return {"kind": kind, "ring": str(value.ring), "branches": value.branches}


def _head_line(command: str, value) -> str:
    h = _head(value)
    return f"{command}: {h['kind']} over {h['ring']}, {h['branches']} branch(es)"


# -- commands -------------------------------------------------------------------


def cmd_validate(args) -> _Report:
    value = _load(args.input, validate=False)
    if isinstance(value, PervObject):
        checks = [("object", validate_object(value))]
    else:
        checks = [("source", validate_object(value.source)),
                  ("target", validate_object(value.target)),
                  ("morphism", validate_morphism(value))]
    violations = [{"part": part, "axiom": v.axiom, "branch": v.branch, "detail": v.detail}
                  for part, rep in checks for v in rep.violations]
    ok = not violations
    data = {"command": "validate", **_head(value), "valid": ok, "violations": violations}
    lines = [_head_line("validate", value) + (": valid" if ok else ": INVALID")]
    for v in violations:
        at = "" if v["branch"] is None else f" (branch {v['branch']})"
        lines.append(f"  {v['part']}: {v['axiom']}{at}: {v['detail']}")
    return _Report(data, lines, EXIT_OK if ok else EXIT_VIOLATION)


def cmd_factor(args) -> _Report:
    T = _load_morphism(args.input, "factor")
    F = perv_factorization(T, check=False)
    flags = morphism_classify(T)
    cls = {k: getattr(flags, k) for k in ("injective", "surjective", "zero", "isomorphism")}
    parts = {name: _describe(obj, args.seed)
             for name, obj in (("kernel", F.kernel), ("image", F.image), ("cokernel", F.cokernel))}
    stalk_maps = {}
    for loc in locations(T.branches):
        maps = induced_stalk_maps(T, loc).maps
        stalk_maps[str(loc)] = {str(k): _map_json(maps[k]) for k in (-1, 0)}
    all_zero = all(m["zero"] for d in stalk_maps.values() for m in d.values())
    data = {"command": "factor", **_head(T), "classification": cls, **parts,
            "stalk_maps": stalk_maps, "stalk_maps_all_zero": all_zero}
    lines = [_head_line("factor", T),
             "  classification: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in cls.items())]
    for name, d in parts.items():
        lines.extend("  " + line for line in _describe_lines(name, d))
    zero_at = [f"{loc}[{k}]" for loc, d in stalk_maps.items() for k, m in d.items() if m["zero"]]
    lines.append(f"  induced stalk maps all zero: {'yes' if all_zero else 'no'}"
                 + ("" if all_zero else f" (zero at: {', '.join(zero_at) or '-'})"))
    return _Report(data, lines)


def _location(args, value) -> Location:
    loc = Location.parse(args.at)
    loc.check(value.branches)
    return loc


def cmd_stalk(args) -> _Report:
    value = _load(args.input)
    loc = _location(args, value)
    data = {"command": "stalk", **_head(value), "location": str(loc)}
    lines = [_head_line("stalk", value) + f", at {loc}"]
    if isinstance(value, PervObject):
        st = stalk_cohomology(value, loc)
        data["stalk"] = {str(k): str(st[k]) for k in (-1, 0)}
        lines += [f"  H^{k} = {st[k]}" for k in (-1, 0)]
    else:
        src = stalk_cohomology(value.source, loc)
        maps = induced_stalk_maps(value, loc)
        data["source"] = {str(k): str(src[k]) for k in (-1, 0)}
        data["target"] = {str(k): str(maps[k]) for k in (-1, 0)}
        data["maps"] = {str(k): _map_json(maps.maps[k]) for k in (-1, 0)}
        for k in (-1, 0):
            f = maps.maps[k]
            lines.append(f"  H^{k}: {src[k]} -> {maps[k]}: {'zero' if f.is_zero() else 'nonzero'}"
                         f" (ker {f.kernel()}, im {f.image()}, coker {f.cokernel()})")
    return _Report(data, lines)


def _objects_of(value) -> list[tuple[str, PervObject]]:
    if isinstance(value, PervObject):
        return [("object", value)]
    F = perv_factorization(value, check=False)
    return [("source", value.source), ("target", value.target),
            ("kernel", F.kernel), ("image", F.image), ("cokernel", F.cokernel)]


def cmd_support(args) -> _Report:
    value = _load(args.input)
    data = {"command": "support", **_head(value)}
    lines = [_head_line("support", value)]
    for name, P in _objects_of(value):
        S = support(P)
        comps = [{"location": str(loc), "dim": d} for loc, d in S.components()]
        data[name] = {"support": str(S), **S.to_json(), "components": comps}
        text = ", ".join(f"{c['location']} (dim {c['dim']})" for c in comps) or "-"
        lines.append(f"  {name}: {S}  components: {text}")
    return _Report(data, lines)


def cmd_cc(args) -> _Report:
    value = _load(args.input)
    value.ring.require_field("cc")
    data = {"command": "cc", **_head(value)}
    lines = [_head_line("cc", value)]
    for name, P in _objects_of(value):
        cc = characteristic_cycle(P)
        data[name] = {"cc": str(cc), **cc.to_json()}
        lines.append(f"  {name}: CC = {cc}")
    return _Report(data, lines)


def cmd_phi(args) -> _Report:
    value = _load(args.input)
    data = {"command": "phi", **_head(value)}
    lines = [_head_line("phi", value)]
    if isinstance(value, PervObject):
        mu = value.vanishing_monodromy()
        data["phi"] = str(value.phi)
        data["monodromy"] = io.matrix_to_json(mu.matrix)
        lines.append(f"  phi = {value.phi}")
        lines.append(f"  monodromy: {data['monodromy']}")
    else:
        b = value.b
        data["map"] = _map_json(b)
        data.update({"kernel": str(b.kernel()), "image": str(b.image()), "cokernel": str(b.cokernel())})
        lines.append(f"  phi(T): {b.domain} -> {b.codomain}, matrix {data['map']['matrix']}")
        lines.append(f"  kernel {data['kernel']}, image {data['image']}, cokernel {data['cokernel']}")
    return _Report(data, lines)


def cmd_hom(args) -> _Report:
    P = _load_object(args.source, "hom --source")
    Q = _load_object(args.target, "hom --target")
    if P.ring != Q.ring:
        raise InputError(f"hom --target: ring {Q.ring} does not match source ring {P.ring}")
    if P.branches != Q.branches:
        raise InputError(f"hom --target: {Q.branches} branches, source has {P.branches}")
    basis = hom_space(P, Q)
    kind = "dimension" if P.ring.is_field else "generators"
    data = {"command": "hom", "ring": str(P.ring), "branches": P.branches, kind: len(basis),
            "basis": [{"a": [io.matrix_to_json(f.matrix) for f in S.a],
                       "b": io.matrix_to_json(S.b.matrix)} for S in basis]}
    label = "dimension" if P.ring.is_field else "generating set size"
    lines = [f"hom: over {P.ring}, {P.branches} branch(es): {label} {len(basis)}"]
    for k, S in enumerate(basis):
        a = ", ".join(str(io.matrix_to_json(f.matrix)) for f in S.a)
        lines.append(f"  [{k}] a = [{a}], b = {io.matrix_to_json(S.b.matrix)}")
    return _Report(data, lines)


def cmd_iso(args) -> _Report:
    P = _load_object(args.source, "iso --source")
    Q = _load_object(args.target, "iso --target")
    if args.trials < 1:
        raise InputError("iso --trials: must be at least 1")
    res = find_isomorphism(P, Q, trials=args.trials, seed=args.seed)
    data = {"command": "iso", "ring": str(P.ring), "verdict": res.verdict,
            "trials": args.trials, "seed": args.seed, "trials_used": res.trials_used}
    lines = [f"iso: {res.verdict} (ring {P.ring}, trials {args.trials}, seed {args.seed})"]
    if res.verdict == "distinguished":
        values = [str(v) for v in res.values]
        data["invariant"] = res.invariant
        data["values"] = values
        lines.append(f"  invariant {res.invariant}: {values[0]} vs {values[1]}")
    if res.morphism is not None:
        data["morphism"] = {"a": [io.matrix_to_json(f.matrix) for f in res.morphism.a],
                            "b": io.matrix_to_json(res.morphism.b.matrix)}
        lines.append(f"  witness found after {res.trials_used} sample(s)")
    return _Report(data, lines)


def cmd_check(args) -> _Report:
    ring = Ring.parse(args.ring)
    if args.suite == "image-variant":
        rep = check_image_variant(gallery("endo_example", ring).value)
        rep.seed = args.seed
    elif args.replay is not None:
        if args.suite == "all":
            raise InputError("check --replay: needs a single suite")
        rep = run_trial(args.suite, ring, args.max_dim, args.replay)
        rep.seed = args.replay
    else:
        if args.trials < 0:
            raise InputError("check --trials: must be nonnegative")
        if args.max_dim < 0:
            raise InputError("check --max-dim: must be nonnegative")
        rep = fuzz(args.suite, args.trials, ring, args.max_dim, args.seed)
    if rep.verdict == UNSUPPORTED:
        raise InputError(f"check --ring: {rep.details.get('reason', 'unsupported ring')}")
    data = {"command": "check", **rep.to_json()}
    lines = rep.summary_lines()
    for sub in [rep] + rep.subreports:
        if sub.witness and "trial_seed" in sub.witness:
            lines.append(f"  replay: pervcalc check --suite {sub.suite} --ring {ring} "
                         f"--max-dim {args.max_dim} --replay {sub.witness['trial_seed']}")
    code = EXIT_OK if rep.ok else EXIT_VIOLATION
    if args.suite == "image-variant" and rep.verdict != COUNTEREXAMPLE:
        code = EXIT_VIOLATION
    return _Report(data, lines, code)


def cmd_gallery(args) -> _Report:
    if args.name is None:
        data = {"command": "gallery", "names": list(NAMES)}
        return _Report(data, list(NAMES))
    entry = gallery(args.name, Ring.parse(args.ring))
    data = io.to_json(entry.value)
    # the gallery writes a loadable file, not a report, in either format
    return _Report(data, [io.dumps(data).rstrip("\n")])


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE instead of stdout")

    parser = _Parser(prog="pervcalc", description="Exact computations with perverse sheaves "
                     "on curve germs, modelled as (Psi, Phi, can, var) diagrams.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_, *, input_=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if input_:
            p.add_argument("--in", dest="input", metavar="FILE",
                           help="input file (default: standard input)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check axioms A1/A2 and morphism compatibility")
    add("factor", cmd_factor, "kernel, image and cokernel of a morphism")
    p = add("stalk", cmd_stalk, "stalk cohomology (and induced maps) at a point")
    p.add_argument("--at", required=True, metavar="origin|branch:i")
    add("support", cmd_support, "supports of an object, or of a morphism's pieces")
    add("cc", cmd_cc, "characteristic cycles (field coefficients)")
    add("phi", cmd_phi, "vanishing cycles of an object or morphism")
    for name, func, help_ in (("hom", cmd_hom, "basis of Hom(source, target)"),
                              ("iso", cmd_iso, "search for an isomorphism")):
        p = add(name, func, help_, input_=False)
        p.add_argument("--source", required=True, metavar="FILE")
        p.add_argument("--target", required=True, metavar="FILE")
        if name == "iso":
            p.add_argument("--trials", type=int, default=64)
            p.add_argument("--seed", type=int, default=None)
    p = add("check", cmd_check, "run a theorem check suite", input_=False)
    p.add_argument("--suite", required=True, choices=SUITES + ("all", "image-variant"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ring", default="q", metavar="q|z|fp:P")
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--replay", type=int, default=None, metavar="TRIAL_SEED",
                   help="rerun the single trial with this per-trial seed")
    p = add("gallery", cmd_gallery, "print a named example (list names without --name)",
            input_=False)
    p.add_argument("--name", choices=NAMES)
    p.add_argument("--ring", default="z", metavar="q|z|fp:P")
    for cmd in ("factor",):
        sub.choices[cmd].add_argument("--seed", type=int, default=None)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        report = args.func(args)
        text = report.render(args.json)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as e:
                raise InputError(f"--out {args.out}: cannot write ({e.strerror})") from None
        else:
            stdout.write(text)
        return report.code
    except InputError as e:
        stderr.write(f"pervcalc: error: {str(e).splitlines()[0]}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
