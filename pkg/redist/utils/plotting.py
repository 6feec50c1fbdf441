import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import matplotlib.tri as mtri

from ..discretization.subgrid import structured_simplex_pattern


def nodal_triangulation(space):
    """Triangulation of all element nodes through the N^2 lattice sub-triangles."""
    sub = structured_simplex_pattern(space.N)
    cells = (np.arange(space.K)[:, None, None] * space.re.Np + sub[None]).reshape(-1, 3)
    return mtri.Triangulation(space.x.ravel(), space.y.ravel(), cells)


def plot_convergence(df, filename, columns=('l2', 'linf', 'l1_abs'), order=None, title=None):
    """
    Log-log error against mesh size with an optional reference slope.

    Parameters
    ----------
    df: pandas.DataFrame
        One row per level with an 'h' column and the error columns
    order: float, optional
        Slope of the dashed reference line
    """
    fig, ax = plt.subplots(figsize=(5, 4))
    h = df['h'].values
    for column in columns:
        if column in df.columns:
            ax.loglog(h, np.abs(df[column].values), 'o-', label=column)
    if order is not None and len(h) > 1:
        ref = df[columns[0]].values[0] * (h / h[0]) ** order
        ax.loglog(h, ref, 'k--', label='slope {0:g}'.format(order))
    ax.set_xlabel('h')
    ax.set_ylabel('error')
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, which='both', alpha=0.3)
    fig.tight_layout()
    fig.savefig(filename, dpi=150)
    plt.close(fig)
    return filename


def plot_contours(space, phi0, phi, filename, levels=None, title=None):
    """Contours of phi0 and the reinitialized phi side by side, zero level in bold."""
    levels = np.arange(-0.9, 0.95, 0.1) if levels is None else levels
    tri = nodal_triangulation(space)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5), sharey=True)
    for ax, values, label in zip(axes, (phi0, phi), ('initial', 'reinitialized')):
        ax.tricontour(tri, np.ravel(values), levels=levels, linewidths=0.6, cmap='coolwarm')
        ax.tricontour(tri, np.ravel(values), levels=[0.0], colors='k', linewidths=1.5)
        ax.set_aspect('equal')
        ax.set_title(label)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(filename, dpi=150)
    plt.close(fig)
    return filename
