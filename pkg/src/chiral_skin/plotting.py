"""PNG figures rendered from the table files of an output directory.

Only the written tables are read, never in-memory results, so any output
directory (CSV or JSON) can be re-plotted later.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .output import read_columns  # noqa: E402

STYLE = {
    "figure.dpi": 120,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.4,
}

DIRECTION_COLORS = {"unidirectional": "tab:red", "bidirectional": "tab:blue", "unclassified": "0.6"}
EDGE_COLORS = {"left": "tab:red", "right": "tab:green", "none": "0.5"}


def _find(directory, name):
    for suffix in ("csv", "json"):
        p = Path(directory) / f"{name}.{suffix}"
        if p.exists():
            return p
    return None


def _load(directory, name):
    p = _find(directory, name)
    return None if p is None else {k: np.array(v) for k, v in read_columns(p).items()}


def _save(fig, directory, name):
    path = Path(directory) / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def _in_pi(ax, axis="x"):
    ticks = np.linspace(0, 2, 5) * np.pi
    labels = ["0", "π/2", "π", "3π/2", "2π"]
    if axis == "x":
        ax.set_xticks(ticks, labels)
    else:
        ax.set_yticks(ticks, labels)


def plot_branch(directory, branch_names, continuum_name=None, out_name="branch", spectrum_name=None):
    fig, ax = plt.subplots(figsize=(5, 4))
    cont = _load(directory, continuum_name) if continuum_name else None
    if cont is not None and cont["K"].size:
        k = np.mod(cont["K"], 2 * np.pi)
        ax.vlines(k, cont["lo"], cont["hi"], color="0.85", lw=2, label="continuum")
    for name in branch_names:
        b = _load(directory, name)
        if b is None:
            continue
        k = np.mod(b["K"], 2 * np.pi)
        order = np.argsort(k)
        ax.plot(k[order], b["eps_re"][order], label=name.replace("_", " "))
    spec = _load(directory, spectrum_name) if spectrum_name else None
    if spec is not None:
        for cls, color in DIRECTION_COLORS.items():
            sel = (spec["bound"] == 1) & (spec["direction_class"] == cls)
            ks, es = [], []
            for peaks, e in zip(spec["K_peaks"][sel], spec["eps_re"][sel]):
                for kk in str(peaks).split(";"):
                    if kk:
                        ks.append(np.mod(float(kk), 2 * np.pi))
                        es.append(e)
            if ks:
                ax.plot(ks, es, "o", ms=3, color=color, label=cls)
    _in_pi(ax)
    ax.set_xlim(0, 2 * np.pi)
    ylo, yhi = -4.0, 4.0
    ax.set_ylim(ylo, yhi)
    ax.set_xlabel("center-of-mass momentum K")
    ax.set_ylabel("pair energy ε / γ₁D")
    ax.legend(loc="best")
    return _save(fig, directory, out_name)


def plot_state(directory, label):
    amp = _load(directory, f"state_{label}_amplitude")
    four = _load(directory, f"state_{label}_fourier")
    if amp is None or four is None:
        return None
    n = int(amp["m"].max())
    g = int(round(np.sqrt(four["abs2"].size)))
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.6))
    axes[0].imshow(amp["abs2"].reshape(n, n), origin="lower", extent=(0.5, n + 0.5, 0.5, n + 0.5), cmap="magma")
    axes[0].set_xlabel("n")
    axes[0].set_ylabel("m")
    axes[0].set_title(f"|ψ(m, n)|²  state {label}")
    k = four["k1"].reshape(g, g)[:, 0]
    axes[1].imshow(four["abs2"].reshape(g, g).T, origin="lower", extent=(k[0], k[-1], k[0], k[-1]), cmap="magma")
    axes[1].set_xlabel("k₁")
    axes[1].set_ylabel("k₂")
    axes[1].set_title("|ψ(k₁, k₂)|²")
    return _save(fig, directory, f"state_{label}")


def plot_effective_spectrum(directory, spectrum_name, loop_name, out_name):
    spec = _load(directory, spectrum_name)
    if spec is None:
        return None
    fig, ax = plt.subplots(figsize=(5, 4))
    loop = _load(directory, loop_name) if loop_name else None
    if loop is not None:
        ax.plot(loop["eps_re"], loop["eps_im"], color="0.4", lw=1, label="PBC")
    for side, color in EDGE_COLORS.items():
        sel = spec["edge_side"] == side
        if sel.any():
            ax.scatter(spec["eps_re"][sel], spec["eps_im"][sel], s=10, c=color, label=f"OBC {side}")
    ax.set_xlabel("Re ε / t")
    ax.set_ylabel("Im ε / t")
    ax.legend(loc="best")
    return _save(fig, directory, out_name)


def plot_profiles(directory, name, out_name, group="state_id", max_curves=None):
    prof = _load(directory, name)
    if prof is None:
        return None
    fig, ax = plt.subplots(figsize=(5, 3.6))
    keys = np.unique(prof[group])
    if max_curves and keys.size > max_curves:
        keys = keys[np.linspace(0, keys.size - 1, max_curves).astype(int)]
    for key in keys:
        sel = prof[group] == key
        ax.semilogy(prof["n"][sel], prof["probability"][sel], lw=0.8, label=f"{group}={key:g}")
    ax.set_xlabel("site n")
    ax.set_ylabel("|ψₙ|²")
    if keys.size <= 6:
        ax.legend(loc="best")
    return _save(fig, directory, out_name)


def plot_potential(directory):
    cross = _load(directory, "potential_cross_sections")
    prof = _load(directory, "loss_profile")
    if cross is None or prof is None:
        return None
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.4))
    axes[0].plot(cross["n"], cross["diagonal"], label="U[n, n]")
    axes[0].plot(cross["n"], cross["antidiagonal"], label="U[n, N+1-n]")
    axes[0].set_xlabel("n")
    axes[0].legend()
    axes[1].plot(prof["K"], prof["U"])
    axes[1].set_xlabel("K")
    axes[1].set_ylabel("U(K)")
    return _save(fig, directory, "potential")


def plot_polaritons(directory):
    d = _load(directory, "polariton_dispersion")
    if d is None:
        return None
    fig, ax = plt.subplots(figsize=(5, 4))
    for xi in np.unique(d["xi"]):
        sel = d["xi"] == xi
        ax.plot(d["K"][sel], d["omega"][sel], ".", ms=1.5, label=f"ξ={xi:g}")
    ax.set_ylim(-6, 6)
    ax.set_xlabel("K")
    ax.set_ylabel("ω(K) − ω₀")
    ax.legend(markerscale=6)
    return _save(fig, directory, "polariton_dispersion")


def plot_directory(directory):
    """Render every figure the directory's tables support; return written paths."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    plt.rcParams.update(STYLE)
    out = []
    if _find(directory, "branch"):
        out.append(plot_branch(directory, ["branch", "branch_nonchiral"], "continuum", "branch", "finite_spectrum"))
    for p in sorted(directory.glob("branch_xi*.*")):
        tag = p.stem[len("branch_"):]
        out.append(plot_branch(directory, [p.stem], f"continuum_{tag}", f"branch_{tag}_plot"))
    for label in ("alpha", "beta", "gamma", "delta", "epsilon", "zeta"):
        out.append(plot_state(directory, label))
    for loop in ("pbc_loop", "pbc_dispersion"):
        if _find(directory, loop) and _find(directory, "obc_spectrum"):
            out.append(plot_effective_spectrum(directory, "obc_spectrum", loop, "spectrum"))
            break
    if _find(directory, "obc_profiles"):
        out.append(plot_profiles(directory, "obc_profiles", "profiles", max_curves=8))
    for p in sorted(directory.glob("obc_spectrum_sigma*.*")):
        tag = p.stem[len("obc_spectrum_"):]
        out.append(plot_effective_spectrum(directory, p.stem, f"pbc_loop_{tag}", f"spectrum_{tag}"))
    if _find(directory, "mid_band_profiles"):
        out.append(plot_profiles(directory, "mid_band_profiles", "mid_band_profiles", group="Phi"))
    out.append(plot_potential(directory))
    out.append(plot_polaritons(directory))
    return [p for p in out if p is not None]
