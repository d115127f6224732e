"""Static figure rendering for the CLI report paths."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# annotating every point stops being readable past this many
_MAX_LABELS = 60


def save_scatter(xs, ys, labels, path, title: str, annotate: bool = True) -> None:
    """Render a labeled 2D scatter to an image file."""
    fig, ax = plt.subplots(figsize=(9, 7))
    ax.scatter(xs, ys, s=18, alpha=0.8)
    if annotate and len(labels) <= _MAX_LABELS:
        for x, y, label in zip(xs, ys, labels):
            ax.annotate(label, (x, y), fontsize=7, alpha=0.8,
                        xytext=(3, 3), textcoords="offset points")
    ax.set_title(title)
    ax.set_xlabel("component 1")
    ax.set_ylabel("component 2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
