"""
Command-line workbench for finite quantum groups.

Usage:
    python scripts/qg.py verify data/definitions/kac_paljutkin.qg
    python scripts/qg.py irr data/definitions/c_s3.qg
    python scripts/qg.py hull data/definitions/group_z2.qg --gens data/definitions/group_z2_gen.cov
    python scripts/qg.py quasi data/definitions/group_s3.qg --omega data/definitions/group_s3_a3.cov
    python scripts/qg.py quasi data/definitions/c_s3.qg --search
    python scripts/qg.py coset data/definitions/group_s3.qg --omega data/definitions/group_s3_a3.cov
    python scripts/qg.py crossed data/definitions/group_z2.qg --action data/definitions/z2_trivial.act -o z2xz2.qg

Exit codes: 0 ok, 1 unreadable input, 2 axiom or precondition failure,
3 internal inconsistency, 4 a theorem check failed.
"""

import argparse
import logging
import os
import sys
from collections import Counter
from typing import Callable, Dict, List, Tuple

import numpy as np
from tqdm import tqdm

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.settings import EQUALITY_EPS, RANDOM_STATE, RANK_CUTOFF
from src.algebra.dual import Functional, format_irr_table, matrix_unit_check, wedderburn
from src.algebra.hopf import FiniteQuantumGroup, load_definition_file, verify_axioms, write_definition_file
from src.algebra.linalg import Tolerance
from src.data.formats import parse_action, read_covectors
from src.theory.cosets import coset_table, functoriality_check, intrinsic_group, surjectivity_check
from src.theory.crossed import (
    HopfAction,
    build_crossed_product,
    crossed_product_report,
    permutation_action,
    trivial_action,
)
from src.theory.ideals import dump_hull, hull_frame, hull_of, ideal_I, left_ideal_from_generators, verify_synthesis
from src.theory.quasigroup import (
    IdempotentState,
    as_state,
    check_idempotent_state,
    coideal_of,
    hull_of_quasi_subgroup,
    J1,
    right_unit_check,
    search_idempotent_states,
)
from src.utils.errors import DefinitionParseError, QuantumGroupError
from src.utils.groups import named_group
from src.utils.reports import format_residual, render_human, render_json, verdict

logger = logging.getLogger("qg")

Result = Tuple[dict, str]


def _load(path: str, tol: Tolerance, check: bool = True) -> FiniteQuantumGroup:
    if not os.path.exists(path):
        raise DefinitionParseError(f"no such file: {path}")
    return load_definition_file(path, tol, check)


def _covectors(path: str, G: FiniteQuantumGroup) -> List[Functional]:
    if not os.path.exists(path):
        raise DefinitionParseError(f"no such file: {path}")
    covectors = read_covectors(path)
    for covec in covectors:
        if covec.shape[0] != G.dim:
            raise DefinitionParseError(f"{path}: covector of dimension {covec.shape[0]}, {G.name} has {G.dim}")
    return [Functional(G, c) for c in covectors]


def load_action(path: str, G: FiniteQuantumGroup) -> HopfAction:
    if not os.path.exists(path):
        raise DefinitionParseError(f"no such file: {path}")
    with open(path) as fh:
        parsed = parse_action(fh.read())
    group = named_group(*parsed["group"])
    if not parsed["perms"]:
        return trivial_action(G, group)
    return permutation_action(G, group, parsed["perms"])


# -- subcommands -------------------------------------------------------------


def cmd_verify(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol, check=False)
    report = verify_axioms(G, tol)
    payload = {"command": "verify", **report.to_dict()}
    rows = [("dim", G.dim), ("haar", "derived" if G.haar_derived else "given"), ("axioms", report.to_frame())]
    rows.append(("verdict", verdict(report.passed)))
    return payload, render_human(f"Axioms of {G.name}", rows)


def cmd_irr(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol)
    table = wedderburn(G, tol, args.seed)
    checks = [matrix_unit_check(b, G, table, tol) for b in table.blocks]
    payload = {
        "command": "irr",
        "name": G.name,
        "blocks": table.dims,
        "F": [np.diag(b.F).real.round(10).tolist() for b in table.blocks],
        "fingerprints": [list(b.fingerprint) for b in table.blocks],
        "matrix_units": all(c.passed for c in checks),
    }
    text = format_irr_table(table) + f"\n  matrix units: {verdict(payload['matrix_units'])}"
    return payload, text


def cmd_hull(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol)
    table = wedderburn(G, tol, args.seed)
    gens = _covectors(args.gens, G)
    I = left_ideal_from_generators(G, table, gens, tol)
    E = hull_of(table, I, tol)
    J = ideal_I(table, E, tol)
    synthesis = verify_synthesis(table, I, tol)
    if args.hull_out:
        with open(args.hull_out, "w") as fh:
            fh.write(dump_hull(E))
    payload = {
        "command": "hull",
        "name": G.name,
        "hull": E.dims,
        "dim_I": I.dim,
        "dim_I_E": J.dim,
        "synthesis": synthesis.to_dict(),
    }
    rows = [
        f"E: [{','.join(str(k) for k in E.dims)}]",
        f"dim I={I.dim}; dim I(E)={J.dim}",
        f"synthesis: {verdict(synthesis.passed)}",
        ("blocks", hull_frame(E)),
    ]
    return payload, render_human(f"Hull of a left ideal in L1({G.name})", rows)


def _states(args, G: FiniteQuantumGroup, table, tol: Tolerance) -> Tuple[List[IdempotentState], dict]:
    if args.search:
        found = search_idempotent_states(G, table, tol=tol)
        info = {"exhaustive": found.exhaustive, "families": found.families, "sources": found.sources}
        return found.states, info
    if not args.omega:
        raise DefinitionParseError("give --omega FILE or --search")
    states = [as_state(G, f, f"omega{k}", tol) for k, f in enumerate(_covectors(args.omega, G))]
    return states, {}


def _coideal_label(dim: int, total: int) -> str:
    if dim == 1:
        return "N = C1"
    if dim == total:
        return "N = L^inf"
    return f"N dim {dim}"


def cmd_quasi(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol)
    table = wedderburn(G, tol, args.seed)
    states, info = _states(args, G, table, tol)
    group = intrinsic_group(G, table, tol)
    entries, rows = [], []
    if info:
        rows.append(f"search: {'exhaustive' if info['exhaustive'] else 'NON-EXHAUSTIVE'}, {len(states)} states")
    for state in tqdm(states, desc="states", disable=args.format == "structured"):
        check = check_idempotent_state(G, state.omega, tol)
        N = coideal_of(G, state, tol)
        hull = hull_of_quasi_subgroup(table, state, tol)
        unit = right_unit_check(G, state, tol)
        outcomes = Counter(coset_table(G, group, N, tol)["outcome"])
        entries.append({
            "label": state.label,
            "residuals": check.to_dict(),
            "coideal_dim": N.dim,
            "hull": hull.dims,
            "right_unit": unit.to_dict(),
            "cosets": dict(outcomes),
        })
        cosets = ", ".join(f"{outcomes[k]}x{k}" for k in ("EqualsN", "Zero") if outcomes[k])
        rows.append(
            f"{state.label}: {_coideal_label(N.dim, G.dim)}; hull [{','.join(str(k) for k in hull.dims)}]; "
            f"right-unit {verdict(unit.passed)}; cosets: {cosets}"
        )
        rows.append(
            f"    residuals: unital {format_residual(check.unital)}, positivity {format_residual(check.positivity)}, "
            f"idempotency {format_residual(check.idempotency)}"
        )
    payload = {"command": "quasi", "name": G.name, "states": entries, **info}
    return payload, render_human(f"Idempotent states of {G.name}", rows)


def cmd_coset(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol)
    table = wedderburn(G, tol, args.seed)
    states, _ = _states(args, G, table, tol)
    group = intrinsic_group(G, table, tol)
    entries, rows = [], [f"intrinsic group: order {group.order}, element orders {group.group.order_sequence()}"]
    for state in tqdm(states, desc="states", disable=args.format == "structured"):
        N = coideal_of(G, state, tol)
        frame = coset_table(G, group, N, tol)
        functorial = functoriality_check(G, J1(G, N, tol), group, tol)
        surjective = {}
        for label, x in zip(group.group.labels, group.elements):
            if abs(state.omega(x.element)) <= tol.equality_eps * G.scale():
                surjective[label] = surjectivity_check(G, N, x, tol)
        entries.append({
            "label": state.label,
            "coideal_dim": N.dim,
            "cosets": frame,
            "functoriality": functorial.to_dict(),
            "surjectivity": surjective,
        })
        rows.append((f"{state.label} ({_coideal_label(N.dim, G.dim)})", frame))
        rows.append(f"    translation functorial: {verdict(functorial.passed)}")
        rows.append(f"    surjectivity: {verdict(all(surjective.values()))} over {len(surjective)} group-likes outside N")
    payload = {"command": "coset", "name": G.name, "intrinsic_group": group.to_dict(), "states": entries}
    return payload, render_human(f"Quantum cosets in {G.name}", rows)


def cmd_crossed(args, tol: Tolerance) -> Result:
    G = _load(args.definition, tol)
    action = load_action(args.action, G)
    table = wedderburn(G, tol, args.seed)
    product = build_crossed_product(G, action, tol)
    report = crossed_product_report(G, action, tol, table, product)
    payload = {"command": "crossed", **report.to_dict()}
    rows = [
        ("dim", report.dim),
        ("rule", f"{report.rule} (printed rule {'passes' if report.printed_rule_passes else 'fails'})"),
        ("axioms max residual", format_residual(report.axioms_max_residual)),
        ("haar fiber residual", format_residual(report.haar_fiber_residual)),
        f"irr: {','.join(str(n) for n in report.irr.dims)} {verdict(report.irr.passed)}",
        ("embedded coideals", ", ".join(f"{k} dim {v}" for k, v in sorted(report.embedded_dims.items()))),
    ]
    if args.output:
        write_definition_file(product, args.output)
        rows.append(("written", args.output))
        payload["output"] = args.output
    return payload, render_human(f"Crossed product {report.name}", rows)


COMMANDS: Dict[str, Callable[..., Result]] = {
    "verify": cmd_verify,
    "irr": cmd_irr,
    "hull": cmd_hull,
    "quasi": cmd_quasi,
    "coset": cmd_coset,
    "crossed": cmd_crossed,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Finite quantum group workbench')
    parser.add_argument('--tol', type=float, default=EQUALITY_EPS,
                        help='Residual threshold for identity checks')
    parser.add_argument('--rank-cutoff', type=float, default=RANK_CUTOFF,
                        help='Relative singular value cutoff for rank decisions')
    parser.add_argument('--seed', type=int, default=RANDOM_STATE,
                        help='Seed for the random splitting elements')
    parser.add_argument('--format', choices=['human', 'structured'], default='human',
                        help='Report format')
    parser.add_argument('--verbose', '-v', action='store_true', help='Log progress')
    sub = parser.add_subparsers(dest='command', required=True)

    for name in ('verify', 'irr'):
        p = sub.add_parser(name)
        p.add_argument('definition')

    p = sub.add_parser('hull')
    p.add_argument('definition')
    p.add_argument('--gens', required=True, help='Covector file with the generators')
    p.add_argument('--hull-out', default=None, help='Write the hull to this file')

    for name in ('quasi', 'coset'):
        p = sub.add_parser(name)
        p.add_argument('definition')
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument('--omega', help='Covector file with idempotent states')
        group.add_argument('--search', action='store_true', help='Search for idempotent states')

    p = sub.add_parser('crossed')
    p.add_argument('definition')
    p.add_argument('--action', required=True, help='Action file')
    p.add_argument('--output', '-o', default=None, help='Write the product definition here')
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        tol = Tolerance(rank_cutoff=args.rank_cutoff, equality_eps=args.tol)
        payload, text = COMMANDS[args.command](args, tol)
    except QuantumGroupError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    print(render_json(payload) if args.format == 'structured' else text)
    if args.command == 'verify' and not payload['passed']:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
