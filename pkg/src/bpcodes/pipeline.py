"""End-to-end construction pipeline and on-disk code bundles.

A Recipe names the expander (LPS primes or a plain cycle), the acting
cyclic subgroup, the local code, and the labeling rule. Building writes
hx.alist / hz.alist, logical and gauge representatives, and a params.json
carrying every intermediate quantity; bundles re-validate on load.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, replace

from .algebra import build_pgl2, is_prime, legendre, unipotent_subgroup
from .classical import LinearCode, local_code_from_spec
from .errors import BpcodesError, DegreeMismatch, RecipeInvalid
from .f2la import F2Matrix, rank, read_alist, write_alist
from .graphs import (
    GraphAction,
    cayley_right_action,
    check_quotient_condition,
    cycle_labeled_graph,
    cycle_rotation_action,
    lps_graph,
    second_eigenvalue,
)
from .products import (
    CircleProductInstance,
    circle_balanced_product,
    homology_split,
    pi_iota_is_identity,
)
from .quantum import css_from_complex, ldpc_check, pk_bounds
from .tanner import (
    TannerComplex,
    build_tanner,
    check_expansion_theorem7,
    check_expansion_theorem8,
    rate_lower_bound,
)

REFERENCE_NOTE = (
    "reference constants p=401, delta=0.1, alpha_ho=1e-3, alpha_co=1e-5 are "
    "documented but far beyond the desk-scale envelope (q <= 61, group order "
    "<= ~230k); builds reject them"
)


@dataclass(frozen=True)
class Recipe:
    """Ingredients for one balanced-product code build."""

    graph: str = "lps"  # "lps" or "cycle:N"
    p: int | None = None
    q: int | None = None
    ell: int | None = None  # defaults: q for lps, required for cycle
    local: str = "gv:6,0.1,0"
    labeling: str = "canonical"
    alpha_ho: float = 0.1
    alpha_co: float = 0.05
    jobs: int = 1

    def validated(self) -> "Recipe":
        if self.graph == "lps":
            p, q = self.p, self.q
            if p is None or q is None:
                raise RecipeInvalid("lps builds need both primes")
            if not (is_prime(p) and is_prime(q)) or p == q or p == 2 or q == 2:
                raise RecipeInvalid("p and q must be distinct odd primes")
            if q <= 2 * math.sqrt(p):
                raise RecipeInvalid("need q > 2*sqrt(p)")
            if legendre(p, q) != -1:
                raise RecipeInvalid(
                    "p must be a non-square modulo q (the projective general "
                    "linear case); otherwise the unipotent quotient argument fails"
                )
            ell = self.ell if self.ell is not None else q
            if ell != q:
                raise RecipeInvalid("the cyclic subgroup order must equal q")
            if ell % 2 == 0:
                raise RecipeInvalid("cyclic order must be odd")
            return replace(self, ell=ell)
        if self.graph.startswith("cycle:"):
            n = int(self.graph.split(":", 1)[1])
            if self.ell is None:
                raise RecipeInvalid("cycle builds need the subgroup order")
            if self.ell % 2 == 0:
                raise RecipeInvalid("cyclic order must be odd")
            if n % self.ell or n // self.ell < 3:
                raise RecipeInvalid("subgroup order must divide the cycle length "
                                    "with quotient at least 3")
            return self
        raise RecipeInvalid(f"unknown graph spec {self.graph!r}")


@dataclass
class BuildResult:
    recipe: Recipe
    instance: CircleProductInstance
    params: dict
    hx: F2Matrix
    hz: F2Matrix
    logicals_z: F2Matrix
    gauge_z: F2Matrix


def load_registry(path: str) -> dict[str, str]:
    """Named local-code recipes: a JSON object mapping names to spec strings
    (e.g. {"klein-local": "hamming7", "small-random": "gv:6,0.1,0"})."""
    import json as _json

    with open(path) as f:
        reg = _json.load(f)
    if not isinstance(reg, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in reg.items()
    ):
        raise RecipeInvalid("registry must map names to spec strings")
    return reg


def resolve_local_spec(spec: str, registry: dict[str, str] | None = None) -> str:
    if registry and spec in registry:
        return registry[spec]
    return spec


def build_instance(recipe: Recipe) -> tuple[TannerComplex, GraphAction, dict]:
    """Construct the graph, the action, and the Tanner complex of a recipe."""
    recipe = recipe.validated()
    info: dict = {"graph": recipe.graph, "local": recipe.local}
    if recipe.graph == "lps":
        graph, group, gens = lps_graph(recipe.p, recipe.q)
        sub = unipotent_subgroup(group)
        qc = check_quotient_condition(group, gens, sub)
        if not qc.holds:
            raise RecipeInvalid(f"quotient condition failed: witness {qc.witness}")
        info["quotient_condition"] = {
            "holds": qc.holds,
            "determinant_shortcut": qc.determinant_shortcut,
        }
        action = cayley_right_action(graph, group, gens, sub)
    else:
        n = int(recipe.graph.split(":", 1)[1])
        graph = cycle_labeled_graph(n)
        action = cycle_rotation_action(graph, recipe.ell)
    local = local_code_from_spec(recipe.local)
    if local.n != graph.s:
        raise DegreeMismatch(
            f"local code length {local.n} differs from graph degree {graph.s}"
        )
    tanner = build_tanner(graph, local, labeling_note=recipe.labeling)
    info["n_vertices"] = graph.n
    info["n_edges"] = graph.n_edges
    info["degree"] = graph.s
    info["local_code"] = {"n": local.n, "k": local.k, "d": local.d, "name": local.name}
    return tanner, action, info


def build_bundle(recipe: Recipe, out_dir: str) -> BuildResult:
    """Run the full pipeline and write the code bundle to out_dir."""
    recipe = recipe.validated()
    tanner, action, info = build_instance(recipe)
    graph = tanner.graph

    lam2 = second_eigenvalue(graph)
    info["lambda2"] = lam2
    info["ramanujan_bound"] = 2 * math.sqrt(graph.s - 1)

    inst = circle_balanced_product(tanner, action)
    split = homology_split(inst, with_projections=inst.product.total.dim(1) <= 512)
    if not pi_iota_is_identity(split):
        raise BpcodesError("fiber sum does not invert the lift; construction bug")

    css = css_from_complex(inst.product.total, 1)
    row_max, col_max = ldpc_check(css.hx, css.hz)

    d_local = tanner.local.d if tanner.local.d is not None else 0
    beta_ho = _safe_beta7(graph.s, lam2, d_local, recipe.alpha_ho)
    beta_co = _safe_beta8(tanner, lam2, recipe.alpha_co)
    bounds = pk_bounds(
        alpha_ho=recipe.alpha_ho,
        beta_ho=max(beta_ho, 0.0),
        alpha_co=recipe.alpha_co,
        beta_co=max(beta_co, 0.0),
        s=graph.s,
        ell=action.group.order,
        n_edges=graph.n_edges,
        n_vertices=graph.n,
        k_local=tanner.local.k,
        n_constructed=css.n,
    )

    params = {
        **info,
        "ell": action.group.order,
        "N": css.n,
        "k_homology": css.k,
        "K_logical": split.dim_h,
        "gauge": split.dim_v,
        "base_tanner_k": inst.base_tanner.code_dimension(),
        "rate_lower_bound": rate_lower_bound(inst.base_tanner.graph, tanner.local),
        "stabilizer_weight_max": row_max,
        "qubit_degree_max": col_max,
        "bounds": {
            "alpha_ho": bounds.alpha_ho,
            "beta_ho": bounds.beta_ho,
            "alpha_co": bounds.alpha_co,
            "beta_co": bounds.beta_co,
            "K_lower": bounds.k_lower,
            "DZ_lower": bounds.dz_lower,
            "DX_lower": bounds.dx_lower,
            "N_formula_3x1": bounds.n_formula,
        },
        "labeling": tanner.labeling_note,
        "reference_note": REFERENCE_NOTE,
    }

    os.makedirs(out_dir, exist_ok=True)
    write_alist(css.hx, os.path.join(out_dir, "hx.alist"))
    write_alist(css.hz, os.path.join(out_dir, "hz.alist"))
    _write_rows(os.path.join(out_dir, "logicals_z.txt"), split.h_reps)
    _write_rows(os.path.join(out_dir, "gauge_z.txt"), split.v_reps)
    params["bundle_hash"] = _bundle_hash(css.hx, css.hz, split.h_reps, split.v_reps)
    with open(os.path.join(out_dir, "params.json"), "w") as f:
        json.dump(params, f, indent=2, sort_keys=True)

    return BuildResult(
        recipe=recipe,
        instance=inst,
        params=params,
        hx=css.hx,
        hz=css.hz,
        logicals_z=split.h_reps,
        gauge_z=split.v_reps,
    )


def _safe_beta7(s, lam2, d_local, alpha):
    from .tanner import theorem7_beta

    try:
        return theorem7_beta(s, lam2, d_local, alpha)
    except BpcodesError:
        return 0.0


def _safe_beta8(tanner: TannerComplex, lam2, alpha):
    from .classical import dual_code, exact_distance
    from .tanner import theorem8_beta

    dual = dual_code(tanner.local)
    dd = dual.d if dual.d is not None else exact_distance(dual)
    return theorem8_beta(tanner.graph.s, lam2, tanner.local.k, dd, alpha)


def _write_rows(path: str, m: F2Matrix) -> None:
    with open(path, "w") as f:
        dense = m.to_dense()
        for i in range(m.rows):
            f.write("".join(str(int(b)) for b in dense[i]) + "\n")


def _read_rows(path: str) -> list[str]:
    with open(path) as f:
        return [line.strip() for line in f if line.strip()]


def _bundle_hash(*mats: F2Matrix) -> str:
    h = hashlib.sha256()
    for m in mats:
        h.update(str((m.rows, m.cols)).encode())
        h.update(m.data.tobytes())
    return h.hexdigest()


def load_and_validate_bundle(out_dir: str) -> dict:
    """Reload a bundle and recheck its stored claims.

    Verifies commuting checks, declared dimensions, the recomputed
    homology count, and the bundle hash.
    """
    with open(os.path.join(out_dir, "params.json")) as f:
        params = json.load(f)
    hx = read_alist(os.path.join(out_dir, "hx.alist"))
    hz = read_alist(os.path.join(out_dir, "hz.alist"))
    if not hx.matmul(hz.transpose()).is_zero():
        raise BpcodesError("reloaded checks do not commute")
    if hx.cols != params["N"] or hz.cols != params["N"]:
        raise BpcodesError("reloaded dimensions disagree with params.json")
    k = hx.cols - rank(hx) - rank(hz)
    if k != params["k_homology"]:
        raise BpcodesError("recomputed homology count disagrees with params.json")
    logicals = _read_rows(os.path.join(out_dir, "logicals_z.txt"))
    gauge = _read_rows(os.path.join(out_dir, "gauge_z.txt"))
    if len(logicals) != params["K_logical"] or len(gauge) != params["gauge"]:
        raise BpcodesError("representative counts disagree with params.json")
    lm = F2Matrix.from_dense([[int(c) for c in row] for row in logicals]) if logicals else F2Matrix.zeros(0, hx.cols)
    gm = F2Matrix.from_dense([[int(c) for c in row] for row in gauge]) if gauge else F2Matrix.zeros(0, hx.cols)
    if not hx.matmul(lm.transpose()).is_zero():
        raise BpcodesError("logical representatives are not cycles")
    if params["bundle_hash"] != _bundle_hash(hx, hz, lm, gm):
        raise BpcodesError("bundle hash mismatch")
    return params
