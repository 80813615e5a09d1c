"""
Incidence-matrix rendering
One pixel per ordered pair in a binary portable pixmap (P6); pixels that agree
with a reference matrix are blended toward white.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from becorder.errors import ParseError
from becorder.matrix import EQUAL, GREATER, INCOMPARABLE, LESS, RelationMatrix
from becorder.models import MatrixCensus

logger = logging.getLogger(__name__)

RGB = Tuple[int, int, int]

DEFAULT_PALETTE: Dict[str, RGB] = {
    "greater": (0, 17, 170),
    "less": (17, 102, 0),
    "incomparable": (136, 0, 17),
}


class RenderSpec(BaseModel):
    """Palette, dimming rule and output path for one image"""
    greater: RGB = DEFAULT_PALETTE["greater"]
    less: RGB = DEFAULT_PALETTE["less"]
    incomparable: RGB = DEFAULT_PALETTE["incomparable"]
    equal: Optional[RGB] = Field(None, description="Defaults to the Greater color")
    dim_fraction: float = Field(0.7, gt=0.0, lt=1.0)
    dim_against: Optional[str] = None
    out: Optional[str] = None

    @model_validator(mode="after")
    def _distinct_colors(self) -> "RenderSpec":
        for name in ("greater", "less", "incomparable", "equal"):
            value = getattr(self, name)
            if value is not None and any(not 0 <= c <= 255 for c in value):
                raise ValueError(f"{name} color out of range: {value}")
        colors = [tuple(self.greater), tuple(self.less), tuple(self.incomparable)]
        if self.equal is not None and tuple(self.equal) != tuple(self.greater):
            colors.append(tuple(self.equal))
        dimmed = [self.dim(c) for c in colors]
        if len(set(colors + dimmed)) != 2 * len(colors):
            raise ValueError("palette colors must stay distinct before and after dimming")
        return self

    @classmethod
    def from_palette(cls, text: Optional[str], **kwargs) -> "RenderSpec":
        """'greater=0,17,170;less=17,102,0' overrides part of the default palette"""
        colors = {}
        for item in filter(None, (text or "").split(";")):
            name, _, value = item.partition("=")
            name = name.strip().lower()
            if name not in ("greater", "less", "incomparable", "equal"):
                raise ParseError(f"unknown palette entry {name!r}")
            try:
                rgb = tuple(int(v) for v in value.split(","))
            except ValueError:
                raise ParseError(f"palette entry {item!r} is not r,g,b")
            if len(rgb) != 3:
                raise ParseError(f"palette entry {item!r} is not r,g,b")
            colors[name] = rgb
        try:
            return cls(**colors, **kwargs)
        except ValueError as exc:
            raise ParseError(str(exc))

    def color_table(self) -> np.ndarray:
        """Row per code: Equal, Greater, Less, Incomparable"""
        equal = self.equal if self.equal is not None else self.greater
        return np.array([equal, self.greater, self.less, self.incomparable], dtype=np.uint8)

    def dim(self, color) -> RGB:
        r, g, b = (int(round(c + (255 - c) * self.dim_fraction)) for c in map(int, color))
        return r, g, b


def render_pixels(matrix: RelationMatrix, spec: RenderSpec, reference: Optional[RelationMatrix] = None) -> np.ndarray:
    """(rows, cols, 3) uint8 image"""
    table = spec.color_table()
    image = table[matrix.codes].astype(np.float64)
    if reference is not None:
        agree = matrix.codes == reference.codes
        image[agree] += (255.0 - image[agree]) * spec.dim_fraction
    return np.rint(image).astype(np.uint8)


def write_ppm(path: str, pixels: np.ndarray) -> None:
    """Write a P6 PPM file"""
    height, width, _ = pixels.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "wb") as f:
        f.write(header)
        f.write(pixels.tobytes())


def read_ppm(path: str) -> np.ndarray:
    data = Path(path).read_bytes()
    fields = []
    pos = 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1
    if fields[0] != b"P6" or fields[3] != b"255":
        raise ParseError(f"{path} is not an 8-bit P6 pixmap")
    width, height = int(fields[1]), int(fields[2])
    return np.frombuffer(data, dtype=np.uint8, count=width * height * 3, offset=pos).reshape(height, width, 3)


def render_matrix(
    matrix: RelationMatrix, spec: RenderSpec, reference: Optional[RelationMatrix] = None
) -> MatrixCensus:
    """Write the image named by spec.out and return the census recounted from the file"""
    if not spec.out:
        raise ParseError("no output path given")
    write_ppm(spec.out, render_pixels(matrix, spec, reference))
    logger.info("wrote %s (%dx%d)", spec.out, matrix.codes.shape[1], matrix.codes.shape[0])
    return census_from_ppm(spec.out, spec, m=matrix.m, method=matrix.method, dim_against=spec.dim_against)


def census_from_ppm(
    path: str,
    spec: RenderSpec,
    m: int = 0,
    method: str = "",
    dim_against: Optional[str] = None,
) -> MatrixCensus:
    """Recount the pair classes from the pixels of a written image

    When Equal shares the Greater color, a shared-color pixel is Equal if it sits
    on the diagonal or its transpose also carries the shared color.
    """
    pixels = read_ppm(path)
    height, width, _ = pixels.shape
    table = spec.color_table()
    codes = np.full((height, width), -1, dtype=np.int8)
    dimmed = np.zeros((height, width), dtype=bool)
    for code in (EQUAL, GREATER, LESS, INCOMPARABLE):
        for faded, color in ((False, tuple(table[code])), (True, spec.dim(table[code]))):
            hit = np.all(pixels == np.array(color, dtype=np.uint8), axis=-1)
            codes[hit] = code
            dimmed[hit] = faded
    if np.any(codes < 0):
        raise ParseError(f"{path} has pixels outside the palette")

    if spec.equal is None or tuple(spec.equal) == tuple(spec.greater):
        shared = codes == GREATER
        codes[shared & shared.T] = EQUAL

    result = MatrixCensus(
        m=m,
        method=method,
        greater=int(np.count_nonzero(codes == GREATER)),
        less=int(np.count_nonzero(codes == LESS)),
        equal=int(np.count_nonzero(codes == EQUAL)),
        incomparable=int(np.count_nonzero(codes == INCOMPARABLE)),
    )
    if dim_against is not None:
        result.dim_against = dim_against
        result.non_dimmed = int(np.count_nonzero(~dimmed))
        result.non_dimmed_incomparable = int(np.count_nonzero(~dimmed & (codes == INCOMPARABLE)))
    return result
