"""Command-line interface.

Commands: build, cycle, forms, pair, moduli, cs, catalog, verify, report.
Exit codes: 0 pass, 2 verification failure, 3 input error, 4 obstruction.
Reports are deterministic given (inputs, seed); the report command also
renders figures and CSV tables next to the JSON output.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

import click
import numpy as np

EXIT_PASS = 0
EXIT_VERIFY = 2
EXIT_INPUT = 3
EXIT_OBSTRUCTION = 4


def _apply_thread_cap() -> None:
    cap = os.environ.get("KANFORM_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, str(path))


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError("not JSON serializable: %r" % type(obj))


def _write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True,
                                   default=_json_default) + "\n")


def _load_complex(spec: str):
    from .simplicial import complex_from_json

    try:
        if spec.startswith("{"):
            data = json.loads(spec)
        else:
            data = json.loads(Path(spec).read_text())
        return complex_from_json(data)
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError("bad complex input: %s" % exc)


def _load_group(spec: str):
    from .liegroup.groups import group_from_json, special_unitary, special_orthogonal, unitary

    shortcuts = {"SU2": lambda: special_unitary(2), "SU3": lambda: special_unitary(3),
                 "U1": lambda: unitary(1), "U2": lambda: unitary(2),
                 "U3": lambda: unitary(3), "SO3": lambda: special_orthogonal(3)}
    if spec in shortcuts:
        return shortcuts[spec]()
    try:
        if spec.startswith("{"):
            data = json.loads(spec)
        else:
            data = json.loads(Path(spec).read_text())
        return group_from_json(data)
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError("bad group descriptor: %s" % exc)


def _load_poly(spec: str, G):
    from .liegroup.polynomials import chern_polynomial, polynomial_from_json, trace_form

    if spec in ("basic", "raw"):
        return trace_form(spec)
    if spec.startswith("chern"):
        return chern_polynomial(int(spec[len("chern"):]), G.n)
    try:
        if spec.startswith("{"):
            data = json.loads(spec)
        else:
            data = json.loads(Path(spec).read_text())
        return polynomial_from_json(data, G.n)
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError("bad polynomial descriptor: %s" % exc)


CONVENTIONS = {
    "moment_sign": -1,
    "natural_coboundary_sign": "(-1)^(i+j+k)",
    "sharp_pullback_sign": "(-1)^(i+j+1)",
    "pairing_identity": "D<omega,c> = -<omega, total boundary c>",
    "momentum_identity": "contraction of omega_c by the fundamental field equals d mu_sharp",
    "cartan_form_normalization": "basic: -tr(XY)/(8 pi^2)",
}


@click.group()
def main() -> None:
    """Chain algebra on free simplicial groups paired with equivariant
    simplicial connection forms on compact matrix groups."""
    _apply_thread_cap()


@main.command()
@click.option("--complex", "complex_spec", required=True,
              help="complex JSON (path or inline)")
@click.option("--out", "out_dir", default="out", show_default=True)
def build(complex_spec: str, out_dir: str) -> None:
    """Build a free simplicial group and check its face identities."""
    K = _load_complex(complex_spec)
    try:
        K.require_identities()
        ok = True
        message = "all simplicial identities hold"
    except Exception as exc:
        ok = False
        message = str(exc)
    payload = {
        "label": K.label,
        "max_degree": K.max_degree,
        "generators": {str(q): [g.name for g in K.alphabet(q)]
                       for q in range(K.max_degree + 1)},
        "faces": {"%s.d%d" % (g.name, i): str(K.face_of_generator(q, g, i))
                  for q in range(1, K.max_degree + 1)
                  for g in K.base_generators(q) for i in range(q + 1)},
        "identity_check": {"pass": ok, "message": message},
    }
    _write_json(Path(out_dir) / "complex.json", payload)
    click.echo("identity check: %s" % ("pass" if ok else "FAIL"))
    if not ok:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--complex", "complex_spec", required=True)
@click.option("--depth", default=3, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def cycle(complex_spec: str, depth: int, out_dir: str) -> None:
    """Construct the fundamental cycle of a surface or 3-complex."""
    from .chains import chain_to_json, retract_to_cellular, total_differential
    from .cyclelift import LiftError, surface_cycle, threefold_cycle

    K = _load_complex(complex_spec)
    try:
        if any(g.name == "sigma" for g in K.base_generators(2)):
            chain, certs = threefold_cycle(K, depth=depth)
        else:
            chain, certs = surface_cycle(K)
            certs = [certs]
    except LiftError as exc:
        click.echo("obstruction: %s" % exc, err=True)
        sys.exit(EXIT_OBSTRUCTION)
    boundary = total_differential(K, chain)
    retraction = retract_to_cellular(K, chain)
    payload = {
        "cycle": chain_to_json(chain),
        "certificates": [c.to_json() for c in certs],
        "boundary_zero": not boundary.terms,
        "cellular_retraction": {"%d:%s" % (dim, name): int(c)
                                for (dim, name), c in retraction.items()},
    }
    _write_json(Path(out_dir) / "cycle.json", payload)
    click.echo("cycle with %d terms, boundary zero: %s"
               % (len(chain.terms), not boundary.terms))
    if boundary.terms:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--samples", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def forms(group: str, poly: str, samples: int, seed: int, out_dir: str) -> None:
    """Sample the equivariant connection-form components; emit CSV rows."""
    from .liegroup.shulman import assemble_omega

    G = _load_group(group)
    Q = _load_poly(poly, G)
    omega = assemble_omega(G, Q)
    rng = np.random.default_rng(seed)
    rows = ["component,a,k,j,sample,slot_hash,value_re,value_im"]
    for form in omega.components():
        for s in range(samples):
            gs = [G.random_element(rng) for _ in range(form.k)]
            X = G.random_algebra(rng) if form.i else None
            tangents = [[G.random_algebra(rng) for _ in range(form.k)]
                        for _ in range(form.j)]
            val = complex(form(gs, X, tangents))
            blob = hashlib.sha256(np.concatenate(
                [g.ravel() for g in gs] or [np.zeros(1)]).tobytes()).hexdigest()[:12]
            rows.append("%s,%d,%d,%d,%d,%s,%.17g,%.17g"
                        % (form.label.replace(",", ";"), form.i // 2, form.k,
                           form.j, s, blob, val.real, val.imag))
    _atomic_write(Path(out_dir) / "forms.csv", "\n".join(rows) + "\n")
    click.echo("wrote %d samples for %d components"
               % (samples, len(omega.components())))


@main.command()
@click.option("--complex", "complex_spec",
              default='{"kind":"surface","genus":1}', show_default=True)
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--tol", default=1e-5, show_default=True)
@click.option("--samples", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def pair(complex_spec: str, group: str, poly: str, tol: float, samples: int,
         seed: int, out_dir: str) -> None:
    """Check the differential identity for the pairing on the cycle."""
    from .cyclelift import surface_cycle, threefold_cycle
    from .liegroup.shulman import assemble_omega
    from .pairing import pairing_identity_residuals

    K = _load_complex(complex_spec)
    G = _load_group(group)
    Q = _load_poly(poly, G)
    if any(g.name == "sigma" for g in K.base_generators(2)):
        chain, _ = threefold_cycle(K)
    else:
        chain, _ = surface_cycle(K)
    omega = assemble_omega(G, Q)
    rng = np.random.default_rng(seed)
    res = pairing_identity_residuals(omega, K, chain, rng, samples=samples)
    worst = max(res.values()) if res else 0.0
    payload = {"residuals": {"q=%d,i=%d,j=%d" % key: val
                             for key, val in sorted(res.items())},
               "worst": worst, "tolerance": tol, "pass": worst <= tol,
               "conventions": CONVENTIONS, "seed": seed}
    _write_json(Path(out_dir) / "pair.json", payload)
    click.echo("pairing identity worst residual %.3e (tol %.1e): %s"
               % (worst, tol, "pass" if worst <= tol else "FAIL"))
    if worst > tol:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--genus", default=1, show_default=True)
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--tol", default=1e-5, show_default=True)
@click.option("--samples", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--verify/--no-verify", default=True, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def moduli(genus: int, group: str, poly: str, tol: float, samples: int,
           seed: int, verify: bool, out_dir: str) -> None:
    """Surface extended-moduli 2-form and momentum identity."""
    from .cyclelift import surface_cycle
    from .liegroup.shulman import assemble_omega
    from .moduli import (ModuliError, momentum_identity_residual,
                         surface_moduli, surface_two_form)

    G = _load_group(group)
    Q = _load_poly(poly, G)
    try:
        M, K = surface_moduli(G, genus)
        chain, _ = surface_cycle(K)
        omega = assemble_omega(G, Q)
        rng = np.random.default_rng(seed)
        rows = []
        worst = 0.0
        for _ in range(samples if verify else 1):
            p = M.random_point(rng)
            data = surface_two_form(M, K, omega, chain, p)
            d = data.basis.shape[1]
            Z = G.random_algebra(rng)
            v = rng.standard_normal(d)
            r = momentum_identity_residual(data, np.zeros(d), Z, v)
            worst = max(worst, r)
            rows.append(r)
    except ModuliError as exc:
        click.echo("obstruction: %s" % exc, err=True)
        sys.exit(EXIT_OBSTRUCTION)
    payload = {"momentum_identity_residuals": rows, "worst": worst,
               "tolerance": tol, "pass": worst <= tol,
               "tangent_dimension": int(d), "conventions": CONVENTIONS,
               "seed": seed}
    _write_json(Path(out_dir) / "moduli.json", payload)
    click.echo("momentum identity worst residual %.3e (tol %.1e): %s"
               % (worst, tol, "pass" if worst <= tol else "FAIL"))
    if verify and worst > tol:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--order", default=16, show_default=True)
@click.option("--steps", default=32, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def cs(group: str, poly: str, order: int, steps: int, out_dir: str) -> None:
    """Circle-valued function on the minimal 3-sphere sweep family."""
    from .liegroup.shulman import assemble_omega
    from .moduli import chern_simons, minimal_sweep_plot, psi_one_form

    G = _load_group(group)
    Q = _load_poly(poly, G)
    omega = assemble_omega(G, Q)
    K, chain, plot, loop = minimal_sweep_plot(G)
    psi = psi_one_form(omega, K, chain, plot, order=order)
    value, report = chern_simons(omega, K, chain, plot, loop,
                                 n_steps=steps, order=order, psi=psi)
    payload = {"circle_value": value.value, "raw_integral": report["raw"],
               "nearest_integer": report["nearest_integer"],
               "integer_distance": report["integer_distance"],
               "conventions": CONVENTIONS}
    _write_json(Path(out_dir) / "cs.json", payload)
    click.echo("sweep loop period %.6f (distance to integer %.2e)"
               % (report["raw"], report["integer_distance"]))


@main.command()
@click.option("--genus", default=1, show_default=True)
@click.option("--un", "n", default=2, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def catalog(genus: int, n: int, out_dir: str) -> None:
    """Generator catalog for U(n) surface representation varieties."""
    from .moduli import un_generator_catalog

    entries = un_generator_catalog(genus, n)
    payload = [{"name": e["name"], "degree": e["degree"], "kind": e["kind"],
                "group": e["group"], "polynomial": e["polynomial"]}
               for e in entries]
    _write_json(Path(out_dir) / "catalog.json", payload)
    for e in payload:
        click.echo("%-8s degree %d  (%s)" % (e["name"], e["degree"], e["kind"]))


@main.command()
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--tol", default=1e-5, show_default=True)
@click.option("--samples", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def verify(group: str, poly: str, tol: float, samples: int, seed: int,
           out_dir: str) -> None:
    """Run the fast identity suite; exit 0 iff all identities pass."""
    payload = _verification_suite(group, poly, tol, samples, seed)
    _write_json(Path(out_dir) / "report.json", payload)
    for name, entry in payload["identities"].items():
        click.echo("%-28s %-4s residual %.3e"
                   % (name, "pass" if entry["pass"] else "FAIL",
                      entry["residual"]))
    if not payload["pass"]:
        sys.exit(EXIT_VERIFY)


def _verification_suite(group: str, poly: str, tol: float, samples: int,
                        seed: int) -> dict:
    from .chains import sharp_normalize, total_differential
    from .cyclelift import surface_cycle
    from .liegroup.shulman import assemble_omega, closedness_residuals, restriction_residual
    from .pairing import pairing_identity_residuals
    from .simplicial import builtin_surface
    from .testutil import random_chain

    G = _load_group(group)
    Q = _load_poly(poly, G)
    rng = np.random.default_rng(seed)
    K = builtin_surface(1)
    identities = {}

    worst = 0
    for _ in range(50):
        c = sharp_normalize(K, random_chain(K, rng, k_max=3, q_max=2))
        dd = total_differential(K, total_differential(K, c))
        worst = max(worst, max((abs(v) for v in dd.terms.values()), default=0))
    identities["total_boundary_squared"] = {"residual": float(worst),
                                            "pass": worst == 0}

    chain, _ = surface_cycle(K)
    b = total_differential(K, chain)
    identities["cycle_boundary"] = {
        "residual": float(max((abs(v) for v in b.terms.values()), default=0)),
        "pass": not b.terms}

    omega = assemble_omega(G, Q)
    res = closedness_residuals(omega, rng, samples=samples)
    worst = max(res.values()) if res else 0.0
    identities["equivariant_closedness"] = {"residual": worst,
                                            "pass": worst <= tol}

    rres = restriction_residual(omega, rng, samples=samples)
    identities["restriction_to_invariant"] = {"residual": rres,
                                              "pass": rres <= 1e-9}

    pres = pairing_identity_residuals(omega, K, chain, rng, samples=samples)
    worst = max(pres.values()) if pres else 0.0
    identities["pairing_differential"] = {"residual": worst,
                                          "pass": worst <= tol}

    for entry in identities.values():
        entry["residual"] = float(entry["residual"])
        entry["pass"] = bool(entry["pass"])
    return {"identities": identities,
            "pass": all(e["pass"] for e in identities.values()),
            "tolerance": tol, "seed": seed, "conventions": CONVENTIONS}


@main.command()
@click.option("--group", default="SU2", show_default=True)
@click.option("--poly", default="basic", show_default=True)
@click.option("--tol", default=1e-5, show_default=True)
@click.option("--samples", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def report(group: str, poly: str, tol: float, samples: int, seed: int,
           out_dir: str) -> None:
    """Full report: verification suite, CSV residual table, figures."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .cyclelift import surface_cycle
    from .liegroup.shulman import assemble_omega
    from .moduli import minimal_sweep_plot, psi_one_form
    from .simplicial import builtin_surface

    out = Path(out_dir)
    payload = _verification_suite(group, poly, tol, samples, seed)

    rows = ["identity,residual,pass"]
    for name, entry in payload["identities"].items():
        rows.append("%s,%.17g,%s" % (name, entry["residual"], entry["pass"]))
    _atomic_write(out / "residuals.csv", "\n".join(rows) + "\n")

    fig, ax = plt.subplots(figsize=(7, 4))
    names = list(payload["identities"])
    vals = [max(payload["identities"][n]["residual"], 1e-17) for n in names]
    ax.barh(names, vals)
    ax.set_xscale("log")
    ax.axvline(tol, linestyle="--", color="k", label="tolerance")
    ax.set_xlabel("residual")
    ax.set_title("identity residuals")
    ax.legend()
    fig.tight_layout()
    out.mkdir(parents=True, exist_ok=True)
    fig.savefig(out / "residuals.png", dpi=150)
    plt.close(fig)

    G = _load_group(group)
    Q = _load_poly(poly, G)
    omega = assemble_omega(G, Q)
    K3, chain3, plot3, loop = minimal_sweep_plot(G)
    psi = psi_one_form(omega, K3, chain3, plot3, order=12)
    ss = np.linspace(0.0, 1.0, 33)
    vals = []
    acc = 0.0
    for k in range(len(ss) - 1):
        mid = 0.5 * (ss[k] + ss[k + 1])
        u = loop(mid)
        du = (np.asarray(loop(ss[k + 1])) - np.asarray(loop(ss[k]))) / (ss[k + 1] - ss[k])
        acc += (ss[k + 1] - ss[k]) * float(np.real(psi(u, None, [du])))
        vals.append(acc)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(ss[1:], vals)
    ax.set_xlabel("loop parameter")
    ax.set_ylabel("partial integral of the sweep 1-form")
    ax.set_title("circle-valued function along the degree-1 sweep loop")
    fig.tight_layout()
    fig.savefig(out / "sweep_period.png", dpi=150)
    plt.close(fig)

    payload["figures"] = ["residuals.png", "sweep_period.png"]
    payload["tables"] = ["residuals.csv"]
    payload["sweep_partial_integral_end"] = vals[-1]
    _write_json(out / "report.json", payload)
    click.echo("report written to %s (pass: %s)" % (out, payload["pass"]))
    if not payload["pass"]:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    main()
