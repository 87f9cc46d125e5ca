import numpy as np
import pytest

from chaostego.chaos import ChaoticKey
from chaostego.imageio import ImageBuffer


@pytest.fixture(scope="session")
def key():
    return ChaoticKey(mu=3.99, lam=3.98, x0=0.3, y0=0.7, z0=0.1, w0=0.1, block_size=16)


@pytest.fixture
def rng():
    return np.random.default_rng(20181016)


def random_image(rng, width, height, channels):
    return ImageBuffer(width, height, channels, rng.integers(0, 256, width * height * channels, dtype=np.uint8))


def _square_512(arr):
    from skimage import transform, util

    h, w = arr.shape[:2]
    s = min(h, w)
    arr = arr[(h - s) // 2:(h - s) // 2 + s, (w - s) // 2:(w - s) // 2 + s]
    if s != 512:
        arr = util.img_as_ubyte(transform.resize(arr, (512, 512), anti_aliasing=True))
    return np.ascontiguousarray(arr)


@pytest.fixture(scope="session")
def cover_panel():
    """Four 512x512 RGB photographs, center-cropped and resized as needed."""
    data = pytest.importorskip("skimage.data")
    names = ("astronaut", "chelsea", "coffee", "rocket")
    return {n: ImageBuffer.from_array(_square_512(getattr(data, n)())) for n in names}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def natural_cover():
    """512x512 RGB photograph (stands in for the standard test covers)."""
    data = pytest.importorskip("skimage.data")
    return ImageBuffer.from_array(data.astronaut())


@pytest.fixture(scope="session")
def natural_secret():
    """256x256 gray photograph."""
    data = pytest.importorskip("skimage.data")
    cam = data.camera()
    return ImageBuffer.from_array(np.ascontiguousarray(cam[::2, ::2]))
