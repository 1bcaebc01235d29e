"""
Line chart of a separation-probability sweep.

One line per dimension D, x = r, y = estimated separation probability. The
figure is drawn on matplotlib's Agg canvas and saved as SVG text.
"""

import io
import math

from matplotlib import rc_context
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

FIGSIZE = (6.4, 4.2)

# Fixed element ids, real <text> elements and no timestamp: the same table
# always renders to the same bytes.
SVG_STYLE = {'svg.hashsalt': 'boxproj', 'svg.fonttype': 'none'}
SVG_METADATA = {'Date': None}


def line_gid(dim):
    """SVG group id of the line drawn for dimension ``dim``."""
    return f'sweep-d{dim}'


def y_upper_limit(table):
    """
    Top of the probability axis.

    The full [0, 1] range once some estimate passes 1/2, otherwise the
    largest estimate plus 0.05 rounded up to a tenth.
    """
    top = max((est.p_hat for line in table.estimates for est in line), default=0.0)
    return 1.0 if top > 0.5 else max(0.1, math.ceil((top + 0.05) * 10) / 10)


def render_sweep_chart(table, title='Probability of a separating random projection'):
    """
    Draw a SweepTable as an SVG line chart.

    Args:
        table: SweepTable
        title: Chart title

    Returns:
        str: Complete SVG document
    """
    r_values = list(table.r_values)
    with rc_context(SVG_STYLE):
        fig = Figure(figsize=FIGSIZE)
        FigureCanvasAgg(fig)
        ax = fig.add_subplot()
        for j, dim in enumerate(table.d_values):
            ax.plot(
                r_values,
                [line[j].p_hat for line in table.estimates],
                linewidth=1.8,
                label=f'D = {dim}',
                gid=line_gid(dim),
            )
        ax.set_title(title)
        ax.set_xlabel('r')
        ax.set_ylabel('P(separation)')
        ax.set_ylim(0.0, y_upper_limit(table))
        ax.grid(True, alpha=0.3)
        ax.legend(loc='upper left', frameon=False)
        fig.tight_layout()
        buffer = io.BytesIO()
        fig.savefig(buffer, format='svg', metadata=SVG_METADATA)
    return buffer.getvalue().decode('utf-8')
