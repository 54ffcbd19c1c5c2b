"""Reference compacta shared by several test modules."""

from holext.shapes import (Annulus, Disk, annulus_with_inner_circle,
                           disk_and_circle, tangent_circles)

BAND = 2.5  # curve band in cells


def named_sets(h):
    """The five reference compacta with their expected hole counts and regularity."""
    return {
        "disk": (Disk(-1, 1.0), 0, []),
        "annulus": (Annulus(0, 1.0, 2.0), 1, [True]),
        "tangent circles": (tangent_circles(BAND * h), 2, [True, True]),
        "disk and circle": (disk_and_circle(BAND * h), 1, [True]),
        "annulus and inner circle": (annulus_with_inner_circle(BAND * h), 2, [False, True]),
    }
