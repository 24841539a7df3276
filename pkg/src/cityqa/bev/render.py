"""Orthographic top-view rasterization of city scenes."""
import numpy as np

from cityqa.scene import EmptyScene

from . import font, palette
from .raster import Raster, Window, check_scale, pixel_count, project


DEFAULT_GLOBAL_SCALE = 0.5

DEFAULT_CROP_SCALE = 0.1


def _scene_window(scene):
    return Window(*scene.extent.footprint)


def _gather(scene, window):
    """Points of `scene` within `window`: coordinates, colors, owners."""
    coords = []
    colors = []
    owners = []

    for obj in scene:
        points = obj.points
        inside = ((points[:, 0] >= window.x_min) & (points[:, 0] <= window.x_max) &
                  (points[:, 1] >= window.y_min) & (points[:, 1] <= window.y_max))

        if not inside.any():
            continue

        coords.append(points[inside])

        if obj.colors is not None:
            colors.append(obj.colors[inside])
        else:
            colors.append(np.tile(palette.category_color(obj.category), (int(inside.sum()), 1)))

        owners.append(np.full(int(inside.sum()), obj.id, dtype=np.int64))

    if not coords:
        return (np.zeros((0, 3)), np.zeros((0, 3), dtype=np.uint8), np.zeros(0, dtype=np.int64))

    return (np.concatenate(coords), np.concatenate(colors), np.concatenate(owners))


def _draw_label(pixels, text, row, col):
    """Draw `text` centered on (row, col), on a one-pixel background border.

    A label which would not lie wholly within the raster is not drawn.

    """
    mask = font.render_text(text)
    (mask_height, mask_width) = mask.shape

    ink = np.zeros((mask_height + 2, mask_width + 2), dtype=bool)
    ink[1:-1, 1:-1] = mask

    top = row - ink.shape[0] // 2
    left = col - ink.shape[1] // 2

    (height, width) = pixels.shape[:2]

    if top < 0 or left < 0 or top + ink.shape[0] > height or left + ink.shape[1] > width:
        return

    region = pixels[top:top + ink.shape[0], left:left + ink.shape[1]]
    region[:] = palette.LABEL_BACKGROUND
    region[ink] = palette.LABEL_INK


def rasterize(scene, window, meters_per_pixel, *, object_id=None, overlay=True, labels=True):
    """Rasterize the points of `scene` within `window`.

    Each pixel takes the color of its highest point (ties to the point
    listed last). With `overlay`, object pixels are blended half-and-half
    with their object's id color; with `labels`, object ids are drawn
    at their centroid pixels, where they fit.

    """
    scale = check_scale(meters_per_pixel)

    width = pixel_count(window.x_max - window.x_min, scale)
    height = pixel_count(window.y_max - window.y_min, scale)

    pixels = np.empty((height, width, 3), dtype=np.uint8)
    pixels[:] = palette.BACKGROUND

    (coords, colors, owners) = _gather(scene, window)

    if len(coords):
        (rows, cols) = project(coords[:, 0], coords[:, 1], window, scale, height, width)
        cells = rows * width + cols

        # z-buffer: sort by cell, then z, then input order; keep each cell's last
        order = np.lexsort((np.arange(len(cells)), coords[:, 2], cells))
        sorted_cells = cells[order]
        last = np.ones(len(order), dtype=bool)
        last[:-1] = sorted_cells[1:] != sorted_cells[:-1]
        winners = order[last]

        winner_colors = colors[winners].astype(np.uint16)

        if overlay:
            overlay_colors = palette.id_color(owners[winners]).astype(np.uint16)
            winner_colors = (winner_colors + overlay_colors) // 2

        pixels[rows[winners], cols[winners]] = winner_colors.astype(np.uint8)

    centroid_pixels = {}

    for obj in scene:
        (cx, cy, _cz) = obj.centroid

        if window.contains(cx, cy):
            centroid_pixels[obj.id] = project(cx, cy, window, scale, height, width)

    if labels:
        for (label_id, (row, col)) in sorted(centroid_pixels.items()):
            _draw_label(pixels, str(label_id), row, col)

    return Raster(
        pixels,
        scale,
        window,
        base_z=scene.extent.min.z,
        scene_id=scene.scene_id,
        object_id=object_id,
        centroid_pixels=centroid_pixels,
    )


def render_global_bev(scene, meters_per_pixel=DEFAULT_GLOBAL_SCALE, *,
                      overlay=True, labels=True) -> Raster:
    """Top-view raster of the entire scene extent."""
    if not len(scene):
        raise EmptyScene(scene.scene_id)

    return rasterize(scene, _scene_window(scene), meters_per_pixel,
                     overlay=overlay, labels=labels)


def crop_window(scene, object_id, margin) -> Window:
    """Object footprint expanded by `margin`, clamped to the scene extent."""
    if margin < 0:
        raise ValueError(f'margin must be non-negative not {margin!r}')

    obj = scene.get(object_id)
    return Window(*obj.bbox.footprint).expand(margin).clamp(_scene_window(scene))


def render_object_crop(scene, object_id, margin=0.0, meters_per_pixel=DEFAULT_CROP_SCALE, *,
                       overlay=True, labels=True) -> Raster:
    """Object-centric top-view raster (see `crop_window`)."""
    window = crop_window(scene, object_id, margin)
    return rasterize(scene, window, meters_per_pixel, object_id=object_id,
                     overlay=overlay, labels=labels)
