"""Command-line front end.

Loads states from QST files, runs the measures, sweeps parameter grids, and
emits CSV.  Every output starts with a ``# gme-lab <version> seed=<seed>``
comment line followed by a header row; floats carry 12 significant digits.

Exit codes: 0 success, 1 malformed input file, 2 precondition violation,
3 numerical nonconvergence.  On nonconvergence any completed rows are still
printed, with a trailing ``converged`` column marking the failed point.
"""

import argparse
import itertools
import math
import sys

import numpy as np

from . import __version__
from ._util import fmt12
from .bipartite import concurrence, negativity
from .boundent import (
    dur_gme,
    dur_negativity_one_vs_rest,
    dur_negativity_two_vs_rest,
    mk_max,
    smolin_ree,
    smolin_state,
    upb_state,
    upb_unextendibility_sweep,
)
from .errors import NonconvergenceError, PreconditionError, QstFormatError
from .geomopt import HartreeConfig, entanglement_eigenvalue
from .mixedhull import ghz_w_wtilde_mixed_gme, mixed_symmetric_gme
from .protocols import pure_yield, pure_yield_limit, schumacher_demo, werner_trace
from .qstate import PartitionSpec, PureState, load_qst, partial_transpose
from .ree import ReeConfig, conjectured_ree, numeric_ree, ree_lower_bound
from .xychain import (
    ChainParams,
    _finite_dE_dh,
    dE_dh,
    ed_oracle,
    entanglement_density_N,
    scaling_fit,
    thermo_density,
)


class _Partial(Exception):
    """Raised when a sweep hits a nonconvergent point; carries finished rows."""

    def __init__(self, header, done_rows, failed_row, message):
        super().__init__(message)
        self.header = header
        self.done_rows = done_rows
        self.failed_row = failed_row


# ----------------------------------------------------------------------
# shared plumbing
# ----------------------------------------------------------------------


def _write_csv(args, header, rows):
    lines = [f"# gme-lab {__version__} seed={args.seed}", ",".join(header)]
    lines.extend(",".join(fmt12(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_pure(path):
    state = load_qst(path)
    if not isinstance(state, PureState):
        raise PreconditionError("this command expects a pure-state file")
    return state


def _load_density(path):
    state = load_qst(path)
    return state.density() if isinstance(state, PureState) else state


def _parse_cut(text, n_parties):
    """'1:rest' or '1,2:rest' with 1-based party labels -> PartitionSpec."""
    head, sep, tail = text.partition(":")
    if not sep or tail != "rest":
        raise PreconditionError("cut must look like '1:rest' or '1,2:rest'")
    try:
        parties = sorted({int(tok) for tok in head.split(",")})
    except ValueError:
        raise PreconditionError("cut parties must be integers") from None
    if not parties or parties[0] < 1 or parties[-1] > n_parties:
        raise PreconditionError(f"cut parties must lie in 1..{n_parties}")
    if len(parties) >= n_parties:
        raise PreconditionError("cut must leave at least one party on each side")
    return PartitionSpec.of([p - 1 for p in parties], n_parties)


def _parse_h_values(args):
    """Either --h or --h-range lo:hi with --step; endpoints always included."""
    single = getattr(args, "h", None)
    rng = getattr(args, "h_range", None)
    if single is not None and rng is not None:
        raise PreconditionError("give either --h or --h-range, not both")
    if single is not None:
        return np.array([float(single)])
    if rng is None:
        raise PreconditionError("one of --h or --h-range is required")
    head, sep, tail = rng.partition(":")
    try:
        lo, hi = float(head), float(tail if sep else head)
    except ValueError:
        raise PreconditionError("--h-range must look like 'lo:hi'") from None
    if hi < lo:
        raise PreconditionError("--h-range must satisfy lo <= hi")
    if hi == lo:
        return np.array([lo])
    step = getattr(args, "step", None)
    if step is None or step <= 0.0:
        raise PreconditionError("--step > 0 is required with a nondegenerate --h-range")
    count = int(math.floor((hi - lo) / step + 1e-9))
    if abs(lo + count * step - hi) < 1e-9 * max(1.0, abs(hi)):
        return np.linspace(lo, hi, count + 1)
    return lo + step * np.arange(count + 1)


# ----------------------------------------------------------------------
# command handlers: each returns (header, rows)
# ----------------------------------------------------------------------


def _cmd_gme_pure(args):
    psi = _load_pure(args.file)
    rep = entanglement_eigenvalue(psi, HartreeConfig(seed=args.seed))
    header = ["lambda_max", "e_sin2", "e_log2"]
    row = [rep.lambda_max, rep.e_sin2, rep.e_log2]
    if not rep.converged:
        raise _Partial(header, [], row, "alternating power iteration did not converge")
    return header, [row]


def _cmd_gme_mixed_sym(args):
    value = mixed_symmetric_gme(args.n, args.k1, args.k2, args.s, grid=args.grid)
    return (
        ["n", "k1", "k2", "s", "e_sin2"],
        [[args.n, args.k1, args.k2, args.s, value]],
    )


def _cmd_gme_ghzw(args):
    value = ghz_w_wtilde_mixed_gme(args.x, args.y)
    return ["x", "y", "e_sin2"], [[args.x, args.y, value]]


def _cmd_measure_negativity(args):
    rho = _load_density(args.file)
    cut = _parse_cut(args.cut, len(rho.dims))
    return ["cut", "negativity"], [[args.cut, negativity(rho, cut)]]


def _cmd_measure_concurrence(args):
    rho = _load_density(args.file)
    return ["concurrence"], [[concurrence(rho)]]


def _cmd_ree_bound(args):
    psi = _load_pure(args.file)
    value = ree_lower_bound(psi, HartreeConfig(seed=args.seed))
    return ["ree_lower_bound"], [[value]]


def _cmd_ree_numeric(args):
    rho = _load_density(args.file)
    result = numeric_ree(rho, ansatz_size=args.ansatz, cfg=ReeConfig(seed=args.seed))
    return (
        ["ree_upper_bound", "components", "evaluations"],
        [[result.value, len(result.ansatz.weights), result.evaluations]],
    )


def _cmd_ree_conj(args):
    n = args.n
    if not (0 <= args.k1 <= n and 0 <= args.k2 <= n) or args.k1 == args.k2:
        raise PreconditionError("k1 and k2 must be distinct and lie in 0..n")
    if not 0.0 <= args.s <= 1.0:
        raise PreconditionError("s must lie in [0, 1]")
    p = np.zeros(n + 1)
    p[args.k1] = args.s
    p[args.k2] += 1.0 - args.s
    result = conjectured_ree(n, p)
    closed = math.nan if result.closed_form is None else result.closed_form
    return (
        ["n", "k1", "k2", "s", "ree_conjectured", "closed_form"],
        [[n, args.k1, args.k2, args.s, result.value, closed]],
    )


def _cmd_bound_smolin(args):
    rho = smolin_state()
    rows = [["e_sin2", 0.5], ["e_log2", 1.0], ["ree", smolin_ree()]]
    labels = "ABCD"
    for size in (1, 2):
        for combo in itertools.combinations(range(4), size):
            if size == 2 and 0 not in combo:
                continue  # the complement names the same cut
            cut = PartitionSpec.of(list(combo), 4)
            name = "".join(labels[i] for i in combo)
            rest = "".join(labels[i] for i in range(4) if i not in combo)
            rows.append([f"negativity_{name}:{rest}", negativity(rho, cut)])
    return ["quantity", "value"], rows


def _cmd_bound_dur(args):
    result = dur_gme(args.n, args.x, verify=False)
    rows = [
        ["e_sin2", result.e_sin2],
        ["e_log2", result.e_log2],
        ["negativity_1:rest", dur_negativity_one_vs_rest(args.n, args.x)],
        ["negativity_12:rest", dur_negativity_two_vs_rest(args.n, args.x)],
    ]
    return ["quantity", "value"], rows


def _cmd_bound_upb(args):
    rho = upb_state()
    labels = "ABC"
    rows = []
    for party in range(3):
        cut = PartitionSpec.of([party], 3)
        eigs = np.linalg.eigvalsh(partial_transpose(rho, cut))
        rows.append([f"min_pt_eig_{labels[party]}:rest", float(eigs[0])])
    rows.append(["min_max_product_overlap", upb_unextendibility_sweep(seed=args.seed)])
    return ["quantity", "value"], rows


def _cmd_bell_mk(args):
    n = args.n
    if not 2 <= n <= 8:
        raise PreconditionError("n must lie in 2..8")
    dim = 2**n
    vec = np.zeros(dim)
    vec[0] = vec[dim - 1] = 1.0 / math.sqrt(2.0)
    rho = PureState((2,) * n, vec).density()
    optimum = mk_max(rho, seed=args.seed)
    qubit_bound = 2.0 ** ((n - 1) / 2.0)
    return (
        ["state", "n", "mk_max", "qubit_bound"],
        [[args.state, n, optimum.value, qubit_bound]],
    )


def _cmd_proto_werner(args):
    trace = werner_trace(args.r0, args.steps)
    return ["step", "r"], [[step, r] for step, r in trace.points]


def _cmd_proto_yield(args):
    per_copy = pure_yield(args.theta, args.n)
    return (
        ["theta", "n", "yield_per_copy", "asymptotic_yield"],
        [[args.theta, args.n, per_copy, pure_yield_limit(args.theta)]],
    )


def _cmd_proto_schumacher(args):
    rep = schumacher_demo()
    return (
        ["entropy_bits", "p_typical", "f_success", "f_failure", "fidelity", "baseline"],
        [
            [
                rep.entropy_bits,
                rep.p_typical,
                rep.f_success,
                rep.f_failure,
                rep.fidelity,
                rep.baseline,
            ]
        ],
    )


def _cmd_xy_finite(args):
    hs = _parse_h_values(args)
    header = ["r", "h", "N", "E_density", "dE_dh"]
    rows = []
    for h in hs:
        h = float(h)
        try:
            dens = entanglement_density_N(ChainParams(N=args.n, r=args.r, h=h))
            deriv = _finite_dE_dh(args.n, args.r, h)
        except NonconvergenceError as exc:
            raise _Partial(
                header, rows, [args.r, h, args.n, math.nan, math.nan], str(exc)
            ) from None
        rows.append([args.r, h, args.n, dens, deriv])
    return header, rows


def _cmd_xy_thermo(args):
    hs = _parse_h_values(args)
    header = ["r", "h", "N", "E_density", "dE_dh"]
    rows = []
    for h in hs:
        h = float(h)
        try:
            dens = thermo_density(args.r, h)
            deriv = math.nan if abs(h - 1.0) < 1e-6 else dE_dh(args.r, h)
        except NonconvergenceError as exc:
            raise _Partial(
                header, rows, [args.r, h, math.inf, math.nan, math.nan], str(exc)
            ) from None
        rows.append([args.r, h, math.inf, dens, deriv])
    return header, rows


def _cmd_xy_scaling(args):
    try:
        sizes = [int(tok) for tok in args.n_list.split(",")]
    except ValueError:
        raise PreconditionError("--n-list must be comma-separated integers") from None
    slope, intercept, nu = scaling_fit(args.r, sizes)
    return (
        ["r", "slope", "intercept", "nu_estimate"],
        [[args.r, slope, intercept, nu]],
    )


def _cmd_xy_oracle(args):
    result = ed_oracle(args.n, args.r, args.h)
    header = ["n", "r", "h", "parity", "energy", "lambda_ed", "lambda_analytic", "abs_diff"]
    rows = []
    for parity, sector, ground in (
        ("even", 0.5, result.even),
        ("odd", 0.0, result.odd),
    ):
        params = ChainParams(N=args.n, r=args.r, h=args.h, sector=sector)
        dens = entanglement_density_N(params)
        lam = 2.0 ** (-0.5 * args.n * dens)
        rows.append(
            [
                args.n,
                args.r,
                args.h,
                parity,
                ground.energy,
                ground.lambda_by_scan,
                lam,
                abs(ground.lambda_by_scan - lam),
            ]
        )
    return header, rows


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root RNG seed (default 0)")
    common.add_argument("--out", default=None, help="write CSV to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="gme-lab",
        description="Entanglement measures for multipartite states: geometric "
        "measure, negativity, relative-entropy bounds, bound-entanglement "
        "diagnostics, distillation protocols, and XY spin-chain scans.",
    )
    parser.add_argument(
        "--version", action="version", version=f"gme-lab {__version__}"
    )
    top = parser.add_subparsers(dest="group", required=True)

    gme = top.add_parser("gme", help="geometric measure of entanglement")
    gme_sub = gme.add_subparsers(dest="command", required=True)
    p = gme_sub.add_parser("pure", parents=[common], help="measures of a pure state file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_gme_pure)
    p = gme_sub.add_parser(
        "mixed-sym", parents=[common], help="convex-roof E_sin2 of a two-Dicke mixture"
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--s", type=float, required=True, help="weight on the k1 component")
    p.add_argument("--grid", type=int, default=401)
    p.set_defaults(handler=_cmd_gme_mixed_sym)
    p = gme_sub.add_parser(
        "ghzw", parents=[common], help="convex-roof E_sin2 of the GHZ/W/inverted-W mixture"
    )
    p.add_argument("--x", type=float, required=True, help="GHZ weight")
    p.add_argument("--y", type=float, required=True, help="W weight")
    p.set_defaults(handler=_cmd_gme_ghzw)

    measure = top.add_parser("measure", help="bipartite-cut measures")
    measure_sub = measure.add_subparsers(dest="command", required=True)
    p = measure_sub.add_parser("negativity", parents=[common], help="negativity across a cut")
    p.add_argument("file")
    p.add_argument("--cut", required=True, help="e.g. 1:rest or 1,2:rest (1-based)")
    p.set_defaults(handler=_cmd_measure_negativity)
    p = measure_sub.add_parser("concurrence", parents=[common], help="two-qubit concurrence")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_measure_concurrence)

    ree = top.add_parser("ree", help="relative entropy of entanglement")
    ree_sub = ree.add_subparsers(dest="command", required=True)
    p = ree_sub.add_parser("bound", parents=[common], help="-2 log2(Lambda_max) lower bound")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_ree_bound)
    p = ree_sub.add_parser("numeric", parents=[common], help="separable-ansatz upper bound")
    p.add_argument("file")
    p.add_argument("--ansatz", type=int, default=None, help="number of product components")
    p.set_defaults(handler=_cmd_ree_numeric)
    p = ree_sub.add_parser(
        "conj", parents=[common], help="conjectured REE of a two-Dicke symmetric mixture"
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--s", type=float, required=True, help="weight on the k1 component")
    p.set_defaults(handler=_cmd_ree_conj)

    bound = top.add_parser("bound", help="bound entangled states")
    bound_sub = bound.add_subparsers(dest="command", required=True)
    p = bound_sub.add_parser("smolin", parents=[common], help="four-qubit unlockable state")
    p.set_defaults(handler=_cmd_bound_smolin)
    p = bound_sub.add_parser("dur", parents=[common], help="N-qubit single-excitation mixture")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True, help="GHZ weight")
    p.set_defaults(handler=_cmd_bound_dur)
    p = bound_sub.add_parser("upb", parents=[common], help="unextendible-product-basis state")
    p.set_defaults(handler=_cmd_bound_upb)

    bell = top.add_parser("bell", help="Bell-operator maxima")
    bell_sub = bell.add_subparsers(dest="command", required=True)
    p = bell_sub.add_parser("mk", parents=[common], help="Mermin-Klyshko maximum")
    p.add_argument("--state", choices=("ghz",), default="ghz")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_bell_mk)

    proto = top.add_parser("proto", help="distillation and compression protocols")
    proto_sub = proto.add_subparsers(dest="command", required=True)
    p = proto_sub.add_parser("werner", parents=[common], help="two-pair purification trace")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(handler=_cmd_proto_werner)
    p = proto_sub.add_parser("yield", parents=[common], help="pure-state distillation yield")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_proto_yield)
    p = proto_sub.add_parser("schumacher", parents=[common], help="three-letter compression demo")
    p.set_defaults(handler=_cmd_proto_schumacher)

    xy = top.add_parser("xy", help="anisotropic XY chain in a transverse field")
    xy_sub = xy.add_subparsers(dest="command", required=True)
    p = xy_sub.add_parser("finite", parents=[common], help="finite-N entanglement density")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True, help="anisotropy")
    p.add_argument("--h", type=float, default=None, help="single field value")
    p.add_argument("--h-range", default=None, help="lo:hi sweep")
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(handler=_cmd_xy_finite)
    p = xy_sub.add_parser("thermo", parents=[common], help="thermodynamic-limit density")
    p.add_argument("--r", type=float, required=True, help="anisotropy")
    p.add_argument("--h-range", required=True, help="lo:hi sweep (lo == hi for one point)")
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(handler=_cmd_xy_thermo)
    p = xy_sub.add_parser("scaling", parents=[common], help="derivative-peak scaling fit")
    p.add_argument("--r", type=float, required=True, help="anisotropy")
    p.add_argument("--n-list", required=True, help="comma-separated chain sizes")
    p.set_defaults(handler=_cmd_xy_scaling)
    p = xy_sub.add_parser("oracle", parents=[common], help="exact-diagonalization cross-check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.set_defaults(handler=_cmd_xy_oracle)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        header, rows = args.handler(args)
    except (OSError, QstFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _Partial as exc:
        header = list(exc.header) + ["converged"]
        rows = [list(row) + [True] for row in exc.done_rows]
        rows.append(list(exc.failed_row) + [False])
        _write_csv(args, header, rows)
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NonconvergenceError as exc:
        _write_csv(args, ["converged"], [[False]])
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _write_csv(args, header, rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
