"""Reading and writing stimulus images as 8-bit grayscale PGM (P5) or PNG.

Intensity 1.0 maps to gray level 255. Quantization uses round-to-nearest,
ties to even, so fully white and fully black pixels survive a round trip
exactly.
"""

import io

import numpy as np
from PIL import Image

from .errors import DataError
from .synth import StimulusImage


def to_bytes_grid(image):
    return np.round(image.intensity * 255.0).astype(np.uint8)


def from_bytes_grid(grid):
    grid = np.asarray(grid, dtype=np.uint8)
    height, width = grid.shape
    return StimulusImage(width=width, height=height, intensity=grid / 255.0)


def write_pgm(image, path):
    grid = to_bytes_grid(image)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.width} {image.height}\n255\n".encode("ascii"))
        fh.write(grid.tobytes())


def read_pgm(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DataError(f"image: cannot read {path}: {exc}") from exc
    tokens = []
    pos = 0
    # header: magic, width, height, maxval; '#' starts a comment
    while len(tokens) < 4 and pos < len(data):
        if data[pos:pos + 1].isspace():
            pos += 1
        elif data[pos:pos + 1] == b"#":
            pos = data.find(b"\n", pos)
            pos = len(data) if pos < 0 else pos + 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if len(tokens) < 4 or tokens[0] != b"P5":
        raise DataError(f"image: {path} is not a binary PGM (P5) file")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise DataError(f"image: {path}: only maxval 255 is supported")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise DataError(f"image: {path}: truncated raster")
    grid = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return from_bytes_grid(grid)


def png_bytes(image):
    buffer = io.BytesIO()
    Image.fromarray(to_bytes_grid(image), mode="L").save(buffer, format="PNG")
    return buffer.getvalue()


def write_png(image, path):
    with open(path, "wb") as fh:
        fh.write(png_bytes(image))


def read_png(path):
    try:
        with Image.open(path) as img:
            grid = np.asarray(img.convert("L"))
    except OSError as exc:
        raise DataError(f"image: cannot read {path}: {exc}") from exc
    return from_bytes_grid(grid)


def read_image(path):
    """Load a grayscale stimulus from a .pgm or .png file."""
    name = str(path).lower()
    if name.endswith(".pgm"):
        return read_pgm(path)
    if name.endswith(".png"):
        return read_png(path)
    raise DataError(f"image: {path}: unsupported format (use .pgm or .png)")


def write_image(image, path):
    """Write a stimulus to .pgm or .png, chosen by file extension."""
    name = str(path).lower()
    if name.endswith(".pgm"):
        write_pgm(image, path)
    elif name.endswith(".png"):
        write_png(image, path)
    else:
        raise DataError(f"image: {path}: unsupported format (use .pgm or .png)")
